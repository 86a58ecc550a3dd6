#include <doctest.h>

#include <string>

#include "fiberq/errors.hpp"
#include "fiberq/models.hpp"
#include "oracles.hpp"

using namespace fiberq;
using oracle::naive_dag;
using oracle::naive_mul;

namespace {

MultimodeParams small_grid() {
    MultimodeParams g;
    g.mode_freqs = {-1.0, 0.0, 1.0};
    g.delta_w = 1.0;
    g.omega0 = 10.0;
    g.hbar = 1.0;
    g.gamma = 0.7;
    g.beta = {0.1, -0.2, 0.3};
    g.alpha = {0.0, 0.05, 0.01};
    g.raman_rr = {0.2, 0.6, 1.0, 0.6, 0.2};
    g.raman_ri = {-0.03, -0.1, 0.0, 0.1, 0.03};
    g.n_max = {1, 2, 1};
    return g;
}

bool has_note(const MultimodeSystem& s, const std::string& needle) {
    for (const auto& n : s.notes)
        if (n.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("single mode without nonlinearity is pure dispersion") {
    MultimodeParams g;
    g.mode_freqs = {0.0};
    g.beta = {0.8};
    g.alpha = {0.0};
    g.raman_rr = {1.0};
    g.raman_ri = {0.0};
    g.gamma = 0.0;
    g.n_max = {4};
    const auto mm = build_multimode(g);
    const auto n = number_op(ModeSpace{4});
    CHECK(oracle::max_diff(mm.system.hamiltonian.matrix(), cplx{0.8} * n.matrix()) < 1e-15);
    REQUIRE(mm.system.jumps.size() == 1);
    CHECK(mm.system.jumps[0].label == "loss[0]");
    CHECK(frobenius_norm(mm.system.jumps[0].op.matrix()) == 0.0);
}

TEST_CASE("no imaginary response gives only loss jumps") {
    auto g = small_grid();
    g.raman_ri.assign(5, 0.0);
    const auto mm = build_multimode(g);
    CHECK(mm.system.jumps.size() == 3);
    for (std::size_t m = 0; m < 3; ++m) {
        CHECK(mm.system.jumps[m].label == "loss[" + std::to_string(m) + "]");
        const auto a = embed(annihilation_op(ModeSpace{g.n_max[m]}), m, mm.system.space);
        CHECK(oracle::max_diff(mm.system.jumps[m].op.matrix(), cplx{std::sqrt(g.alpha[m])} * a.matrix()) < 1e-15);
    }
}

TEST_CASE("grid table symmetry is enforced") {
    auto g = small_grid();
    g.raman_rr[0] = 0.3;
    CHECK_THROWS_AS(build_multimode(g), ParameterError);
    g = small_grid();
    g.raman_ri[4] = 0.04;
    CHECK_THROWS_AS(build_multimode(g), ParameterError);
    g = small_grid();
    g.raman_ri = {0.03, 0.1, 0.0, -0.1, -0.03};
    CHECK_THROWS_AS(build_multimode(g), ParameterError);
    g = small_grid();
    g.raman_rr.pop_back();
    CHECK_THROWS_AS(build_multimode(g), ParameterError);
    g = small_grid();
    g.mode_freqs[2] = 1.5;
    CHECK_THROWS_AS(build_multimode(g), ParameterError);
    g = small_grid();
    g.pumps[5] = {1.0, 0.0};
    CHECK_THROWS_AS(build_multimode(g), ParameterError);
}

TEST_CASE("dimension cap names the required cap") {
    auto g = small_grid();
    g.n_max = {9, 9, 9};
    g.dim_cap = 500;
    try {
        build_multimode(g);
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("at least 1000") != std::string::npos);
    }
    g.dim_cap = 1000;
    CHECK_NOTHROW(build_multimode(g));
}

TEST_CASE("unsubstituted Hamiltonian matches an explicit operator sum") {
    const auto g = small_grid();
    const auto mm = build_multimode(g);
    const auto& sp = mm.system.space;
    const std::size_t d = sp.total_dim();
    const long m = 3;

    std::vector<CMatrix> a, ad;
    std::vector<double> s;
    for (std::size_t k = 0; k < 3; ++k) {
        a.push_back(embed(annihilation_op(ModeSpace{g.n_max[k]}), k, sp).matrix());
        ad.push_back(naive_dag(a.back()));
        s.push_back(std::sqrt(g.hbar * (g.omega0 + g.mode_freqs[k]) / g.delta_w));
    }
    CMatrix h(d, d);
    for (std::size_t k = 0; k < 3; ++k) h = h + cplx{g.beta[k]} * naive_mul(ad[k], a[k]);
    const double pref = g.gamma / (2 * std::numbers::pi) / (2 * g.hbar * g.omega0);
    for (long p = 0; p < m; ++p)
        for (long q = 0; q < m; ++q)
            for (long j = -2; j <= 2; ++j) {
                const long c = p - j, e = q + j;
                if (c < 0 || c >= m || e < 0 || e >= m) continue;
                const double coef = pref * g.raman_rr[static_cast<std::size_t>(j + 2)] * s[p] * s[q] * s[c] * s[e];
                h = h + cplx{coef} * naive_mul(naive_mul(ad[p], ad[q]), naive_mul(a[c], a[e]));
            }
    CHECK(oracle::max_diff(mm.system.hamiltonian.matrix(), h) < 1e-12);
    CHECK(hermiticity_error(mm.system.hamiltonian.matrix()) < 1e-14);

    // raman[1] = scale * sum_a s_{a-1} s_a a^dag_{a-1} a_a
    const double scale1 = std::sqrt(2 * g.gamma / (2 * std::numbers::pi) * 0.1 / (g.hbar * g.omega0));
    CMatrix l1 = cplx{scale1 * s[0] * s[1]} * naive_mul(ad[0], a[1]) + cplx{scale1 * s[1] * s[2]} * naive_mul(ad[1], a[2]);
    bool found = false;
    for (const auto& j : mm.system.jumps)
        if (j.label == "raman[1]") {
            found = true;
            CHECK(oracle::max_diff(j.op.matrix(), l1) < 1e-14);
        }
    CHECK(found);
}

TEST_CASE("SpFWM reduces from a three-mode grid") {
    SpFWMParams p;
    p.n_max = 3;
    p.gamma = 1.2;
    p.power = 0.8;
    p.rr_omega = 0.7;
    p.ri_omega = 0.1;
    p.alpha_s = 0.01;
    p.alpha_i = 0.02;
    p.beta_s = 0.3;
    p.beta_i = -0.1;
    p.beta_p = 0.05;
    for (double z : {0.0, 0.7}) {
        const auto r = oracle::spfwm_reduction(p, z);
        CAPTURE(z);
        CHECK(r.labels_ok);
        CHECK(r.worst() <= 1e-12);
    }
}

TEST_CASE("BS reduces from a five-mode grid") {
    BSParams p;
    p.n_max = 2;
    p.gamma = 0.9;
    p.power = 1.1;
    p.ri_shift = 0.05;
    p.ri_shift_minus_sep = 0.07;
    p.ri_shift_plus_sep = 0.11;
    p.alpha_s = 0.01;
    p.alpha_i = 0.02;
    p.beta_s = 0.3;
    p.beta_i = 0.1;
    p.beta_p1 = -0.2;
    p.beta_p2 = 0.4;
    for (double z : {0.0, 0.7}) {
        const auto r = oracle::bragg_reduction(p, z);
        CAPTURE(z);
        CHECK(r.labels_ok);
        CHECK(r.worst() <= 1e-12);
    }
}

TEST_CASE("builder notes") {
    auto g = small_grid();
    g.n_max = {1, 0, 1};
    CHECK(has_note(build_multimode(g), "n_max = 0"));

    g = small_grid();
    g.pumps[1] = {pump_amplitude(1.0, g.delta_w), 0.0};
    const auto mm = build_multimode(g);
    CHECK(has_note(mm, "loss ignored"));
    CHECK(mm.quantum_modes == std::vector<std::size_t>{0, 2});
    CHECK(mm.system.space.mode_count() == 2);
}
