#pragma once

// Reference computations used by the unit tests and the acceptance binary.
// Everything here is built from index arithmetic and naive loops, without
// going through the library's kron/embed/generator code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fiberq/lindblad.hpp"
#include "fiberq/models.hpp"

namespace oracle {

using fiberq::CMatrix;
using fiberq::cplx;

inline CMatrix zeros(std::size_t n) { return CMatrix(n, n); }

inline CMatrix naive_mul(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s{};
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline CMatrix naive_dag(const CMatrix& a) {
    CMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

inline CMatrix lin(cplx x, const CMatrix& a, cplx y, const CMatrix& b) {
    CMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = x * a(i, j) + y * b(i, j);
    return c;
}

inline double max_diff(const CMatrix& a, const CMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

/// Ladder operator on one of two modes (mode 0 slowest), both truncated at
/// nmax, from <.., n-1, ..| a |.., n, ..> = sqrt(n).
inline CMatrix two_mode_ladder(std::size_t nmax, int mode, bool create) {
    const std::size_t d1 = nmax + 1;
    CMatrix m(d1 * d1, d1 * d1);
    for (std::size_t ns = 0; ns <= nmax; ++ns)
        for (std::size_t ni = 0; ni <= nmax; ++ni) {
            const std::size_t col = ns * d1 + ni;
            std::size_t ts = ns, ti = ni;
            std::size_t& n = mode == 0 ? ts : ti;
            double amp;
            if (create) {
                if (n == nmax) continue;
                ++n;
                amp = std::sqrt(static_cast<double>(n));
            } else {
                if (n == 0) continue;
                amp = std::sqrt(static_cast<double>(n));
                --n;
            }
            m(ts * d1 + ti, col) = amp;
        }
    return m;
}

/// i(H rho - rho H) + sum_v (L rho L^dag - 1/2 (rho L^dag L + L^dag L rho)).
inline CMatrix naive_rhs(const CMatrix& h, const std::vector<CMatrix>& jumps, const CMatrix& rho) {
    const cplx iu{0.0, 1.0};
    CMatrix out = lin(iu, naive_mul(h, rho), -iu, naive_mul(rho, h));
    for (const auto& l : jumps) {
        const CMatrix ld = naive_dag(l);
        const CMatrix ll = naive_mul(ld, l);
        const CMatrix sandwich = naive_mul(naive_mul(l, rho), ld);
        const CMatrix anti = lin(1.0, naive_mul(rho, ll), 1.0, naive_mul(ll, rho));
        out = lin(1.0, out, 1.0, lin(1.0, sandwich, -0.5, anti));
    }
    return out;
}

inline std::vector<CMatrix> jump_matrices(const fiberq::LindbladSystem& s) {
    std::vector<CMatrix> v;
    for (const auto& j : s.jumps) v.push_back(j.op.matrix());
    return v;
}

/// Random density matrix on `dim` states; `allowed(k)` selects the support.
template <class Pred>
CMatrix random_density(std::size_t dim, std::mt19937_64& rng, Pred allowed, int rank = 3) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.1, 1.0);
    CMatrix rho(dim, dim);
    double wsum = 0.0;
    std::vector<double> w(static_cast<std::size_t>(rank));
    for (auto& x : w) wsum += (x = u(rng));
    for (int r = 0; r < rank; ++r) {
        std::vector<cplx> psi(dim);
        double n2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k)
            if (allowed(k)) {
                psi[k] = {g(rng), g(rng)};
                n2 += std::norm(psi[k]);
            }
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                rho(i, j) += w[static_cast<std::size_t>(r)] / wsum / n2 * psi[i] * std::conj(psi[j]);
    }
    return rho;
}

inline CMatrix random_density(std::size_t dim, std::mt19937_64& rng) {
    return random_density(dim, rng, [](std::size_t) { return true; });
}

/// Random density matrix of two modes with occupations < nmax in both modes,
/// so that truncation terms of the moment equations vanish.
inline CMatrix random_inner_density(std::size_t nmax, std::mt19937_64& rng) {
    const std::size_t d1 = nmax + 1;
    return random_density(d1 * d1, rng,
                          [&](std::size_t k) { return k / d1 < nmax && k % d1 < nmax; });
}

/// Random Hermitian matrix with entries of order one.
inline CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = g(rng);
        for (std::size_t j = i + 1; j < n; ++j) {
            m(i, j) = {g(rng), g(rng)};
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

/// exp(M z) x for a 2x2 complex matrix, by scaling and squaring of a long
/// Taylor series.
inline std::array<cplx, 2> expm2_apply(const std::array<std::array<cplx, 2>, 2>& m, double z,
                                       std::array<cplx, 2> x) {
    using M2 = std::array<std::array<cplx, 2>, 2>;
    auto mul = [](const M2& a, const M2& b) {
        M2 c{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        return c;
    };
    double norm = 0.0;
    for (const auto& r : m)
        for (const auto& v : r) norm += std::abs(v);
    int squarings = 0;
    double scale = z;
    while (norm * std::abs(scale) > 0.1) {
        scale /= 2.0;
        ++squarings;
    }
    M2 a{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a[i][j] = m[i][j] * scale;
    M2 e{{{1.0, 0.0}, {0.0, 1.0}}};
    M2 term = e;
    for (int k = 1; k <= 30; ++k) {
        term = mul(term, a);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) term[i][j] /= static_cast<double>(k);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) e[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s) e = mul(e, e);
    return {e[0][0] * x[0] + e[0][1] * x[1], e[1][0] * x[0] + e[1][1] * x[1]};
}

// --- grid reduction ----------------------------------------------------------

struct ReductionResult {
    double h_diff = 0.0;
    double jump_diff = 0.0;
    double extra_jump_norm = 0.0;  ///< multimode jumps with no reduced counterpart
    double k_diff = 0.0;           ///< frame wavenumbers, multimode vs reduced
    bool labels_ok = true;

    double worst() const { return std::max({h_diff, jump_diff, extra_jump_norm, k_diff}); }
};

inline double max_abs_entry(const CMatrix& m) {
    double x = 0.0;
    for (const auto& v : m.data()) x = std::max(x, std::abs(v));
    return x;
}

/// Compares a reduced system with a multimode system acting on the same
/// (s, i) basis, both moved to the rotating frame of the reduced model's
/// wavenumbers. The multimode frame is taken at z_eval (where its pump
/// phases were evaluated); the reduced frame at z = 0.
inline ReductionResult compare_reduction(const fiberq::LindbladSystem& reduced,
                                         const fiberq::LindbladSystem& grid_in_si_order, double z_eval,
                                         const std::map<std::string, std::string>& label_map) {
    ReductionResult r;
    const auto k_red = fiberq::mode_wavenumbers(reduced);
    const auto k_grid = fiberq::mode_wavenumbers(grid_in_si_order);
    for (std::size_t m = 0; m < k_red.size(); ++m) r.k_diff = std::max(r.k_diff, std::abs(k_red[m] - k_grid[m]));

    const auto red = fiberq::rotating_frame(reduced, k_red, 0.0);
    const auto grid = fiberq::rotating_frame(grid_in_si_order, k_red, z_eval);
    r.h_diff = max_diff(red.hamiltonian.matrix(), grid.hamiltonian.matrix());

    std::vector<bool> used(grid.jumps.size(), false);
    for (const auto& j : red.jumps) {
        auto it = label_map.find(j.label);
        if (it == label_map.end()) {
            r.labels_ok = false;
            continue;
        }
        bool found = false;
        for (std::size_t g = 0; g < grid.jumps.size(); ++g) {
            if (grid.jumps[g].label != it->second) continue;
            found = true;
            used[g] = true;
            r.jump_diff = std::max(r.jump_diff, max_diff(j.op.matrix(), grid.jumps[g].op.matrix()));
        }
        if (!found) {
            // Missing in the grid build: acceptable only if the reduced jump is zero.
            r.extra_jump_norm = std::max(r.extra_jump_norm, max_abs_entry(j.op.matrix()));
        }
    }
    for (std::size_t g = 0; g < grid.jumps.size(); ++g)
        if (!used[g]) r.extra_jump_norm = std::max(r.extra_jump_norm, max_abs_entry(grid.jumps[g].op.matrix()));
    return r;
}

/// SpFWM reduction on a 3-mode grid (i, p, s) at (-Omega, 0, +Omega) with the
/// center mode substituted by a classical pump. Pump wavenumber is chosen to
/// phase-match. Returns the comparison.
inline ReductionResult spfwm_reduction(const fiberq::SpFWMParams& p, double z_eval, double delta_w = 2.0e12) {
    using namespace fiberq;
    const auto pm = phase_match(p);
    MultimodeParams g;
    g.mode_freqs = {-delta_w, 0.0, delta_w};
    g.delta_w = delta_w;
    g.gamma = p.gamma;
    g.beta = {p.beta_i, p.beta_p, p.beta_s};
    g.alpha = {p.alpha_i, 0.0, p.alpha_s};
    // index j + 2 for j in [-2, 2]; R^R_0 = 1 is the normalization behind k_s.
    g.raman_rr = {0.0, p.rr_omega, 1.0, p.rr_omega, 0.0};
    g.raman_ri = {0.0, -p.ri_omega, 0.0, p.ri_omega, 0.0};
    g.n_max = {p.n_max, 0, p.n_max};
    g.exact_photon_energy = false;
    g.z_eval = z_eval;
    const double k_p = 0.5 * (pm.at("s") + pm.at("i"));
    g.pumps[1] = {pump_amplitude(p.power, delta_w), k_p};

    const auto mm = build_multimode(g);
    // System modes are (i, s); reorder to (s, i).
    LindbladSystem si;
    const std::vector<std::size_t> order{1, 0};
    const auto reduced = build_spfwm(p);
    si.space = reduced.space;
    si.hamiltonian = Operator(reduced.space, permute_modes(mm.system.hamiltonian, order).matrix());
    for (const auto& j : mm.system.jumps)
        si.jumps.push_back({j.label, j.scale, Operator(reduced.space, permute_modes(j.op, order).matrix())});
    return compare_reduction(reduced, si, z_eval,
                             {{"loss_s", "loss[2]"}, {"loss_i", "loss[0]"}, {"raman", "raman[1]"}});
}

/// BS reduction on a 5-mode grid: p1, p2 at 0, phi; a frozen spectator at
/// 2 phi; s, i at 3 phi, 4 phi. Hence phi = delta_w, Phi = 3 delta_w,
/// Phi - phi = 2 delta_w, Phi + phi = 4 delta_w. R^R is flat at 1 (the
/// setting in which the reduced k_s, k_i formulas follow from the grid sum).
inline ReductionResult bragg_reduction(const fiberq::BSParams& p, double z_eval, double delta_w = 1.0e12) {
    using namespace fiberq;
    const auto pm = phase_match(p);
    MultimodeParams g;
    g.mode_freqs = {-2 * delta_w, -delta_w, 0.0, delta_w, 2 * delta_w};
    g.delta_w = delta_w;
    g.gamma = p.gamma;
    g.beta = {p.beta_p1, p.beta_p2, 0.0, p.beta_s, p.beta_i};
    g.alpha = {0.0, 0.0, 0.0, p.alpha_s, p.alpha_i};
    g.raman_rr.assign(9, 1.0);
    // index j + 4; R^I_phi = 0 (pumps do not exchange energy).
    g.raman_ri = {-p.ri_shift_plus_sep, -p.ri_shift, -p.ri_shift_minus_sep, 0.0, 0.0,
                  0.0,                  p.ri_shift_minus_sep, p.ri_shift, p.ri_shift_plus_sep};
    g.n_max = {0, 0, 0, p.n_max, p.n_max};
    g.exact_photon_energy = false;
    g.z_eval = z_eval;
    const double k_p1 = 0.25;
    const double k_p2 = k_p1 + pm.at("i") - pm.at("s");
    const double amp = pump_amplitude(p.power, delta_w);
    g.pumps[0] = {amp, k_p1};
    g.pumps[1] = {amp, k_p2};

    const auto mm = build_multimode(g);
    // System modes are (spectator, s, i) with the spectator one-dimensional,
    // so the matrices already act on the (s, i) basis.
    const auto reduced = build_bragg(p);
    LindbladSystem si;
    si.space = reduced.space;
    si.hamiltonian = Operator(reduced.space, mm.system.hamiltonian.matrix());
    for (const auto& j : mm.system.jumps) si.jumps.push_back({j.label, j.scale, Operator(reduced.space, j.op.matrix())});
    return compare_reduction(reduced, si, z_eval,
                             {{"loss_s", "loss[3]"},
                              {"loss_i", "loss[4]"},
                              {"raman_s", "raman[2]"},
                              {"raman_i", "raman[4]"},
                              {"raman_si", "raman[3]"}});
}

// --- spontaneous Raman depletion -----------------------------------------------

/// Depletion rate from the R^I table seen as a step function over grid cells
/// [mu_j - dw/2, mu_j + dw/2], integrated with a midpoint rule refined
/// `refine` times per cell: 2 gt * integral R^I(mu) hbar (omega0 - mu) dmu.
inline double depletion_rate_quadrature(const fiberq::MultimodeParams& g, int refine) {
    const long m = static_cast<long>(g.mode_count());
    const double gt = g.gamma / (2.0 * std::numbers::pi);
    const double h = g.delta_w / refine;
    double integral = 0.0;
    for (long j = 1; j < m; ++j) {
        const double ri = g.raman_ri.at(static_cast<std::size_t>(j + m - 1));
        const double lo = (static_cast<double>(j) - 0.5) * g.delta_w;
        for (int k = 0; k < refine; ++k) {
            const double mu = lo + (k + 0.5) * h;
            integral += ri * g.hbar * (g.omega0 - mu) * h;
        }
    }
    return 2.0 * gt * integral;
}

}  // namespace oracle
