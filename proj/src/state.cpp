#include "fiberq/state.hpp"

#include <cmath>
#include <string>

#include "fiberq/errors.hpp"

namespace fiberq {

DensityMatrix::DensityMatrix(CompositeSpace space, CMatrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (!matrix_.square() || matrix_.rows() != space_.total_dim())
        throw DimensionError("DensityMatrix: matrix side does not match space dimension");
}

DensityMatrix DensityMatrix::checked(CompositeSpace space, CMatrix matrix) {
    DensityMatrix rho(std::move(space), std::move(matrix));
    rho.validate();
    return rho;
}

void DensityMatrix::validate() const {
    if (!all_finite(matrix_)) throw ParameterError("DensityMatrix: non-finite entries");
    const auto inv = monitor_invariants(matrix_);
    if (inv.herm_err > kHermiticityTol)
        throw ParameterError("DensityMatrix: not Hermitian (max |rho - rho^dag| = " +
                             std::to_string(inv.herm_err) + ")");
    if (inv.trace_err > kTraceTol)
        throw ParameterError("DensityMatrix: trace deviates from 1 by " +
                             std::to_string(inv.trace_err));
    if (inv.min_eig < kPositivityTol)
        throw ParameterError("DensityMatrix: negative eigenvalue " + std::to_string(inv.min_eig));
}

DensityMatrix DensityMatrix::pure(const CompositeSpace& space, std::span<const cplx> psi) {
    if (psi.size() != space.total_dim())
        throw DimensionError("DensityMatrix::pure: vector length does not match space");
    double norm2 = 0.0;
    for (const auto& c : psi) norm2 += std::norm(c);
    if (!(norm2 > 0.0)) throw ParameterError("DensityMatrix::pure: zero vector");
    const double inv = 1.0 / norm2;
    CMatrix m(psi.size(), psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (psi[i] == cplx{}) continue;
        for (std::size_t j = 0; j < psi.size(); ++j) m(i, j) = inv * psi[i] * std::conj(psi[j]);
    }
    return {space, std::move(m)};
}

DensityMatrix DensityMatrix::fock(const CompositeSpace& space,
                                  std::span<const std::size_t> occupation) {
    const std::size_t k = space.index(occupation);
    CMatrix m(space.total_dim(), space.total_dim());
    m(k, k) = 1.0;
    return {space, std::move(m)};
}

DensityMatrix DensityMatrix::fock(const CompositeSpace& space,
                                  std::initializer_list<std::size_t> occupation) {
    return fock(space, std::span<const std::size_t>(occupation.begin(), occupation.size()));
}

DensityMatrix DensityMatrix::vacuum(const CompositeSpace& space) {
    CMatrix m(space.total_dim(), space.total_dim());
    m(0, 0) = 1.0;
    return {space, std::move(m)};
}

DensityMatrix DensityMatrix::coherent(const CompositeSpace& space,
                                      std::span<const cplx> amplitudes) {
    if (amplitudes.size() != space.mode_count())
        throw DimensionError("DensityMatrix::coherent: one amplitude per mode required");
    std::vector<std::vector<cplx>> factors;
    for (std::size_t k = 0; k < amplitudes.size(); ++k)
        factors.push_back(truncated_coherent(space.modes()[k], amplitudes[k]));
    const auto psi = product_state(factors);
    return pure(space, psi);
}

std::vector<cplx> truncated_coherent(ModeSpace mode, cplx amplitude) {
    std::vector<cplx> v(mode.dim());
    // c_n = alpha^n / sqrt(n!), built recursively; normalization applied after.
    cplx c = 1.0;
    double norm2 = 0.0;
    for (std::size_t n = 0; n <= mode.n_max; ++n) {
        if (n > 0) c *= amplitude / std::sqrt(static_cast<double>(n));
        v[n] = c;
        norm2 += std::norm(c);
    }
    const double s = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= s;
    return v;
}

std::vector<cplx> product_state(std::span<const std::vector<cplx>> factors) {
    std::vector<cplx> psi{1.0};
    for (const auto& f : factors) {
        std::vector<cplx> next(psi.size() * f.size());
        for (std::size_t i = 0; i < psi.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j) next[i * f.size() + j] = psi[i] * f[j];
        psi = std::move(next);
    }
    return psi;
}

cplx expectation(const Operator& op, const DensityMatrix& rho) {
    if (!(op.space() == rho.space()))
        throw DimensionError("expectation: operator and state act on different spaces");
    return expectation(op, rho.matrix());
}

InvariantRecord monitor_invariants(const CMatrix& rho) {
    InvariantRecord r;
    r.trace_err = std::abs(trace(rho) - cplx{1.0, 0.0});
    r.herm_err = hermiticity_error(rho);
    const std::size_t n = rho.rows();
    CMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
    const auto ev = hermitian_eigenvalues(h);
    r.min_eig = ev.empty() ? 0.0 : ev.front();
    return r;
}

InvariantRecord monitor_invariants(const DensityMatrix& rho) {
    return monitor_invariants(rho.matrix());
}

}  // namespace fiberq
