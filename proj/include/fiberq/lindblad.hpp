#pragma once

// Master-equation right-hand side and fixed-step integration along the fiber.
//
// Sign convention (z is the evolution variable):
//   d rho/dz = i[H, rho] + sum_v ( L_v rho L_v^dag - 1/2 {L_v^dag L_v, rho} )
// H carries km^-1, each L_v carries km^-1/2.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fiberq/observables.hpp"
#include "fiberq/state.hpp"
#include "fiberq/tensor.hpp"

namespace fiberq {

struct Jump {
    std::string label;
    double scale = 0.0;  ///< prefactor applied to the bare operator (km^-1/2)
    Operator op;         ///< scaled operator
};

struct LindbladSystem {
    CompositeSpace space;
    Operator hamiltonian;
    std::vector<Jump> jumps;

    /// Throws if H is not Hermitian within 1e-10 or any operator acts on a
    /// different space.
    void validate() const;
};

/// Sparse view of the fixed generators, gathered once so that each RHS
/// evaluation costs O(nnz * dim) instead of O(dim^3). Operators stay dense;
/// this only records where their nonzeros are.
class LindbladGenerator {
public:
    explicit LindbladGenerator(const LindbladSystem& system);

    std::size_t dim() const noexcept { return dim_; }

    /// out <- rhs(rho). out must be dim x dim.
    void apply(const CMatrix& rho, CMatrix& out) const;
    CMatrix apply(const CMatrix& rho) const;

private:
    struct Entry {
        std::size_t row;
        std::size_t col;
        cplx value;
    };
    using Sparse = std::vector<Entry>;

    static Sparse gather(const CMatrix& m);

    std::size_t dim_ = 0;
    Sparse effective_;  // G = iH - 1/2 sum L^dag L
    std::vector<Sparse> jumps_;
};

/// i(H rho - rho H) + sum_v (L rho L^dag - 1/2 (rho L^dag L + L^dag L rho)).
CMatrix lindblad_rhs(const LindbladSystem& system, const CMatrix& rho);
CMatrix lindblad_rhs(const LindbladSystem& system, const DensityMatrix& rho);

struct IntegratorConfig {
    double step_km = 1e-3;
    bool rehermitize = false;
    int monitor_every = 100;         ///< steps between invariant checks
    double abort_trace_drift = 1e-6;
    double abort_min_eig = -1e-6;

    void validate() const;
    bool operator==(const IntegratorConfig&) const = default;
};

/// One classical RK4 step of size h, with optional (rho + rho^dag)/2.
/// Throws InvariantBreach (reported at z_km + h) if the trace drifts by more
/// than the abort threshold.
CMatrix step_rk4(const LindbladGenerator& gen, const CMatrix& rho, double h, bool rehermitize);
DensityMatrix step_rk4(const LindbladSystem& system, const DensityMatrix& rho, double h,
                       const IntegratorConfig& config = {}, double z_km = 0.0);

struct SampleRecord {
    std::optional<JointNumberTable> joint;  ///< two-mode systems only
    std::vector<double> mean_n;
    std::vector<cplx> mean_b;
    InvariantRecord invariants;
};

struct Trajectory {
    std::vector<double> z_km;
    std::vector<SampleRecord> records;
    DensityMatrix final_state;
    InvariantRecord worst;  ///< max trace/herm error, min eigenvalue over samples
};

SampleRecord observe(const CompositeSpace& space, const CMatrix& rho);

/// Integrates from z = 0 to length_km. Sample points must lie in
/// [0, length_km] and be strictly increasing; z = 0 is always recorded.
/// Each interval between samples is split into equal steps no larger than
/// config.step_km.
Trajectory propagate(const LindbladSystem& system, const DensityMatrix& rho0, double length_km,
                     const IntegratorConfig& config, std::span<const double> sample_points);

/// Uniform sampling: sample_count points from 0 to length_km inclusive.
Trajectory propagate(const LindbladSystem& system, const DensityMatrix& rho0, double length_km,
                     const IntegratorConfig& config, std::size_t sample_count);

std::vector<double> uniform_samples(double length_km, std::size_t count);

}  // namespace fiberq
