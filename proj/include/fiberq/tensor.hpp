#pragma once

// Dense complex matrices and truncated Fock-space operators.
//
// Basis convention for composite spaces: mode 0 is the slowest-varying
// index, i.e. |n0, n1, ..., nK> sits at flat index
//   ((n0 * d1 + n1) * d2 + n2) ...
// where dk = n_max_k + 1. Every operator, state and table in the library uses
// this ordering.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fiberq {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const cplx> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept {
        return data_[r * cols_ + c];
    }

    std::span<cplx> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s) noexcept;

    bool operator==(const CMatrix& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

/// Matrix-vector product.
std::vector<cplx> apply(const CMatrix& a, std::span<const cplx> v);

CMatrix adjoint(const CMatrix& a);
CMatrix kron(const CMatrix& a, const CMatrix& b);
cplx trace(const CMatrix& a);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const CMatrix& a, const CMatrix& b);
/// max_ij |a_ij - conj(a_ji)|
double hermiticity_error(const CMatrix& a);
double frobenius_norm(const CMatrix& a);
bool all_finite(const CMatrix& a);

/// Photon-number truncation of a single mode; dim = n_max + 1.
struct ModeSpace {
    std::size_t n_max = 0;

    std::size_t dim() const noexcept { return n_max + 1; }
    bool operator==(const ModeSpace&) const = default;
};

/// Ordered tensor product of single-mode spaces.
class CompositeSpace {
public:
    CompositeSpace() = default;
    explicit CompositeSpace(std::vector<ModeSpace> modes);
    static CompositeSpace uniform(std::size_t mode_count, std::size_t n_max);

    std::span<const ModeSpace> modes() const noexcept { return modes_; }
    std::size_t mode_count() const noexcept { return modes_.size(); }
    std::size_t total_dim() const noexcept { return total_dim_; }

    /// Flat basis index of the occupation vector.
    std::size_t index(std::span<const std::size_t> occupation) const;
    std::size_t index(std::initializer_list<std::size_t> occupation) const;
    /// Occupation vector of a flat basis index.
    std::vector<std::size_t> occupation(std::size_t flat) const;
    /// Stride of mode k in the flat index.
    std::size_t stride(std::size_t mode) const;

    bool operator==(const CompositeSpace& o) const { return modes_ == o.modes_; }

private:
    std::vector<ModeSpace> modes_;
    std::size_t total_dim_ = 1;
};

/// Square matrix tagged with the composite space it acts on.
class Operator {
public:
    Operator() = default;
    Operator(CompositeSpace space, CMatrix matrix);

    static Operator identity(const CompositeSpace& space);
    static Operator zero(const CompositeSpace& space);

    const CompositeSpace& space() const noexcept { return space_; }
    const CMatrix& matrix() const noexcept { return matrix_; }
    CMatrix& matrix() noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.rows(); }

private:
    CompositeSpace space_;
    CMatrix matrix_;
};

/// Single-mode operator as a one-mode composite.
Operator annihilation_op(ModeSpace space);
Operator creation_op(ModeSpace space);
Operator number_op(ModeSpace space);

/// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op at mode_index.
Operator embed(const Operator& op, std::size_t mode_index, const CompositeSpace& composite);

/// Reorders the tensor factors: result mode k is input mode order[k].
Operator permute_modes(const Operator& op, std::span<const std::size_t> order);

Operator dagger(const Operator& op);
Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(cplx s, const Operator& a);
cplx trace(const Operator& op);

/// Ascending eigenvalues of a Hermitian matrix by cyclic complex Jacobi.
/// Rejects inputs whose hermiticity_error exceeds 1e-10.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);
std::vector<double> hermitian_eigenvalues(const Operator& op);

/// Tr(op · rho).
cplx expectation(const Operator& op, const CMatrix& rho);

}  // namespace fiberq
