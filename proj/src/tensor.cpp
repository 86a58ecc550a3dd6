#include "fiberq/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fiberq/errors.hpp"

namespace fiberq {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                             "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                             "x" + std::to_string(b.cols()));
    }
}

void require_same_space(const Operator& a, const Operator& b, const char* what) {
    if (!(a.space() == b.space())) {
        throw DimensionError(std::string(what) + ": operators act on different spaces");
    }
}

}  // namespace

// --- CMatrix ---------------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("CMatrix: entry count does not match rows*cols");
    }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("CMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> diag) {
    CMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    require_same_shape(*this, o, "add");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    require_same_shape(*this, o, "subtract");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) noexcept {
    for (auto& x : data_) x *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
    CMatrix c(a.rows(), b.cols());
    // i-k-j order; ladder-built operators are mostly zeros, so skipping zero
    // entries of the left factor turns these products into O(nnz * n).
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto crow = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            auto brow = b.row(k);
            for (std::size_t j = 0; j < brow.size(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

std::vector<cplx> apply(const CMatrix& a, std::span<const cplx> v) {
    if (a.cols() != v.size()) throw DimensionError("apply: vector length mismatch");
    std::vector<cplx> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        cplx acc{};
        for (std::size_t k = 0; k < r.size(); ++k) acc += r[k] * v[k];
        out[i] = acc;
    }
    return out;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return k;
}

cplx trace(const CMatrix& a) {
    if (!a.square()) throw DimensionError("trace: matrix is not square");
    cplx t{};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t k = 0; k < da.size(); ++k) m = std::max(m, std::abs(da[k] - db[k]));
    return m;
}

double hermiticity_error(const CMatrix& a) {
    if (!a.square()) throw DimensionError("hermiticity_error: matrix is not square");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

double frobenius_norm(const CMatrix& a) {
    double s = 0.0;
    for (const auto& x : a.data()) s += std::norm(x);
    return std::sqrt(s);
}

bool all_finite(const CMatrix& a) {
    return std::all_of(a.data().begin(), a.data().end(), [](const cplx& x) {
        return std::isfinite(x.real()) && std::isfinite(x.imag());
    });
}

// --- spaces ----------------------------------------------------------------

CompositeSpace::CompositeSpace(std::vector<ModeSpace> modes) : modes_(std::move(modes)) {
    total_dim_ = 1;
    for (const auto& m : modes_) total_dim_ *= m.dim();
}

CompositeSpace CompositeSpace::uniform(std::size_t mode_count, std::size_t n_max) {
    return CompositeSpace(std::vector<ModeSpace>(mode_count, ModeSpace{n_max}));
}

std::size_t CompositeSpace::stride(std::size_t mode) const {
    if (mode >= modes_.size()) throw DimensionError("stride: mode index out of range");
    std::size_t s = 1;
    for (std::size_t k = mode + 1; k < modes_.size(); ++k) s *= modes_[k].dim();
    return s;
}

std::size_t CompositeSpace::index(std::span<const std::size_t> occupation) const {
    if (occupation.size() != modes_.size())
        throw DimensionError("index: occupation length differs from mode count");
    std::size_t flat = 0;
    for (std::size_t k = 0; k < modes_.size(); ++k) {
        if (occupation[k] > modes_[k].n_max)
            throw DimensionError("index: occupation exceeds truncation of mode " +
                                 std::to_string(k));
        flat = flat * modes_[k].dim() + occupation[k];
    }
    return flat;
}

std::size_t CompositeSpace::index(std::initializer_list<std::size_t> occupation) const {
    return index(std::span<const std::size_t>(occupation.begin(), occupation.size()));
}

std::vector<std::size_t> CompositeSpace::occupation(std::size_t flat) const {
    if (flat >= total_dim_) throw DimensionError("occupation: flat index out of range");
    std::vector<std::size_t> occ(modes_.size());
    for (std::size_t k = modes_.size(); k-- > 0;) {
        occ[k] = flat % modes_[k].dim();
        flat /= modes_[k].dim();
    }
    return occ;
}

// --- operators -------------------------------------------------------------

Operator::Operator(CompositeSpace space, CMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (!matrix_.square() || matrix_.rows() != space_.total_dim()) {
        throw DimensionError("Operator: matrix side " + std::to_string(matrix_.rows()) +
                             " does not match space dimension " +
                             std::to_string(space_.total_dim()));
    }
}

Operator Operator::identity(const CompositeSpace& space) {
    return {space, CMatrix::identity(space.total_dim())};
}

Operator Operator::zero(const CompositeSpace& space) {
    return {space, CMatrix(space.total_dim(), space.total_dim())};
}

Operator annihilation_op(ModeSpace space) {
    CMatrix a(space.dim(), space.dim());
    for (std::size_t n = 1; n <= space.n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {CompositeSpace({space}), std::move(a)};
}

Operator creation_op(ModeSpace space) { return dagger(annihilation_op(space)); }

Operator number_op(ModeSpace space) {
    CMatrix n(space.dim(), space.dim());
    for (std::size_t k = 0; k <= space.n_max; ++k) n(k, k) = static_cast<double>(k);
    return {CompositeSpace({space}), std::move(n)};
}

Operator embed(const Operator& op, std::size_t mode_index, const CompositeSpace& composite) {
    if (mode_index >= composite.mode_count())
        throw DimensionError("embed: mode index " + std::to_string(mode_index) +
                             " out of range for " + std::to_string(composite.mode_count()) +
                             " modes");
    if (op.space().mode_count() != 1 || !(op.space().modes()[0] == composite.modes()[mode_index]))
        throw DimensionError("embed: operator space does not match target mode");

    std::size_t outer = 1;
    for (std::size_t k = 0; k < mode_index; ++k) outer *= composite.modes()[k].dim();
    const std::size_t inner = composite.stride(mode_index);

    CMatrix m = kron(CMatrix::identity(outer), kron(op.matrix(), CMatrix::identity(inner)));
    return {composite, std::move(m)};
}

Operator permute_modes(const Operator& op, std::span<const std::size_t> order) {
    const auto& src = op.space();
    if (order.size() != src.mode_count())
        throw DimensionError("permute_modes: order length differs from mode count");
    std::vector<bool> seen(order.size(), false);
    std::vector<ModeSpace> modes;
    for (auto k : order) {
        if (k >= order.size() || seen[k]) throw DimensionError("permute_modes: not a permutation");
        seen[k] = true;
        modes.push_back(src.modes()[k]);
    }
    CompositeSpace dst(std::move(modes));

    const std::size_t d = src.total_dim();
    std::vector<std::size_t> map(d);
    std::vector<std::size_t> occ_dst(order.size());
    for (std::size_t flat = 0; flat < d; ++flat) {
        const auto occ = src.occupation(flat);
        for (std::size_t k = 0; k < order.size(); ++k) occ_dst[k] = occ[order[k]];
        map[flat] = dst.index(occ_dst);
    }
    CMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(map[i], map[j]) = op.matrix()(i, j);
    return {dst, std::move(m)};
}

Operator dagger(const Operator& op) { return {op.space(), adjoint(op.matrix())}; }

Operator operator*(const Operator& a, const Operator& b) {
    require_same_space(a, b, "matmul");
    return {a.space(), a.matrix() * b.matrix()};
}

Operator operator+(const Operator& a, const Operator& b) {
    require_same_space(a, b, "add");
    return {a.space(), a.matrix() + b.matrix()};
}

Operator operator-(const Operator& a, const Operator& b) {
    require_same_space(a, b, "subtract");
    return {a.space(), a.matrix() - b.matrix()};
}

Operator operator*(cplx s, const Operator& a) { return {a.space(), s * a.matrix()}; }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

cplx trace(const Operator& op) { return trace(op.matrix()); }

cplx expectation(const Operator& op, const CMatrix& rho) {
    if (op.dim() != rho.rows() || !rho.square())
        throw DimensionError("expectation: operator and state dimensions differ");
    // Tr(A rho) = sum_ij A_ij rho_ji
    const auto& a = op.matrix();
    cplx t{};
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij != cplx{}) t += aij * rho(j, i);
        }
    return t;
}

// --- Hermitian eigenvalues -------------------------------------------------

std::vector<double> hermitian_eigenvalues(const CMatrix& input) {
    if (!input.square()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
    const double herm = hermiticity_error(input);
    if (herm > 1e-10)
        throw ParameterError("hermitian_eigenvalues: input is not Hermitian (max |M - M^dag| = " +
                             std::to_string(herm) + ")");

    const std::size_t n = input.rows();
    // Work on the exactly Hermitian part.
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = input(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (input(i, j) + std::conj(input(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }

    const double norm = frobenius_norm(a);
    const double target = 1e-12 * norm;
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && norm > 0.0; ++sweep) {
        if (off_norm() <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Negligible against both diagonals: zeroing it is exact to rounding.
                if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
                    std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const cplx phase = apq / mag;  // e^{i phi}
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sconj_phase = s * std::conj(phase);  // s e^{-i phi}
                const cplx c_conj_phase = c * std::conj(phase);

                // A <- A J, J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = c * akp - sconj_phase * akq;
                    a(k, q) = s * akp + c_conj_phase * akq;
                }
                // A <- J^dag A
                const cplx s_phase = s * phase;
                const cplx c_phase = c * phase;
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk - s_phase * aqk;
                    a(q, k) = s * apk + c_phase * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> hermitian_eigenvalues(const Operator& op) {
    return hermitian_eigenvalues(op.matrix());
}

}  // namespace fiberq
