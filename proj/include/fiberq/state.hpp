#pragma once

#include <span>
#include <vector>

#include "fiberq/tensor.hpp"

namespace fiberq {

/// Validation thresholds for a physical density matrix.
inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPositivityTol = -1e-8;

/// Hermitian, positive-semidefinite, unit-trace state on a composite space.
class DensityMatrix {
public:
    DensityMatrix() = default;
    /// Takes the matrix as given; call validate() to enforce invariants.
    DensityMatrix(CompositeSpace space, CMatrix matrix);

    /// Constructs and throws ParameterError if any invariant fails.
    static DensityMatrix checked(CompositeSpace space, CMatrix matrix);

    /// |psi><psi| for a normalized state vector (normalized here).
    static DensityMatrix pure(const CompositeSpace& space, std::span<const cplx> psi);
    static DensityMatrix fock(const CompositeSpace& space, std::span<const std::size_t> occupation);
    static DensityMatrix fock(const CompositeSpace& space, std::initializer_list<std::size_t> occupation);
    static DensityMatrix vacuum(const CompositeSpace& space);
    /// Product of truncated coherent states, each renormalized on its
    /// truncated mode.
    static DensityMatrix coherent(const CompositeSpace& space, std::span<const cplx> amplitudes);

    const CompositeSpace& space() const noexcept { return space_; }
    const CMatrix& matrix() const noexcept { return matrix_; }
    CMatrix& matrix() noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.rows(); }

    void validate() const;

private:
    CompositeSpace space_;
    CMatrix matrix_;
};

/// Normalized truncated coherent vector on a single mode.
std::vector<cplx> truncated_coherent(ModeSpace mode, cplx amplitude);

/// Tensor product of per-mode state vectors (mode 0 slowest).
std::vector<cplx> product_state(std::span<const std::vector<cplx>> factors);

cplx expectation(const Operator& op, const DensityMatrix& rho);

/// Invariant diagnostics of a state.
struct InvariantRecord {
    double trace_err = 0.0;  ///< |Tr rho - 1|
    double herm_err = 0.0;   ///< max |rho - rho^dag|
    double min_eig = 0.0;    ///< smallest eigenvalue of the Hermitian part
};

InvariantRecord monitor_invariants(const CMatrix& rho);
InvariantRecord monitor_invariants(const DensityMatrix& rho);

}  // namespace fiberq
