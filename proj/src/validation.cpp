#include "fiberq/validation.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "fiberq/config.hpp"
#include "fiberq/lindblad.hpp"
#include "fiberq/models.hpp"
#include "fiberq/semiclassical.hpp"

namespace fiberq {

namespace {

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult bound(std::string name, double value, double limit) {
    return {std::move(name), value <= limit, "value " + sci(value) + " (limit " + sci(limit) + ")"};
}

/// Random density matrix with support on occupations < n_max in every mode.
CMatrix random_state(const CompositeSpace& space, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const std::size_t d = space.total_dim();
    std::vector<cplx> psi_a(d), psi_b(d);
    for (std::size_t k = 0; k < d; ++k) {
        const auto occ = space.occupation(k);
        bool inner = true;
        for (std::size_t m = 0; m < occ.size(); ++m) inner = inner && occ[m] < space.modes()[m].n_max;
        if (!inner) continue;
        psi_a[k] = {g(rng), g(rng)};
        psi_b[k] = {g(rng), g(rng)};
    }
    auto ra = DensityMatrix::pure(space, psi_a).matrix();
    auto rb = DensityMatrix::pure(space, psi_b).matrix();
    CMatrix rho = cplx{0.7} * ra + cplx{0.3} * rb;
    return rho;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
    std::vector<CheckResult> out;
    auto guarded = [&](const std::string& name, const std::function<CheckResult()>& f) {
        try {
            out.push_back(f());
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("exception: ") + e.what()});
        }
    };

    guarded("truncated commutator [a, a^dag]", [] {
        const ModeSpace m{5};
        const auto c = commutator(annihilation_op(m), creation_op(m));
        CMatrix expect = CMatrix::identity(6);
        expect(5, 5) = -5.0;
        return bound("truncated commutator [a, a^dag]", max_abs_diff(c.matrix(), expect), 1e-14);
    });

    guarded("distinct modes commute", [] {
        const auto sp = CompositeSpace::uniform(2, 3);
        const auto a0 = embed(annihilation_op(ModeSpace{3}), 0, sp);
        const auto a1 = embed(creation_op(ModeSpace{3}), 1, sp);
        return bound("distinct modes commute", frobenius_norm(commutator(a0, a1).matrix()), 1e-14);
    });

    guarded("Jacobi spectrum of a Hermitian matrix", [] {
        // Eigenvalues of [[2, i], [-i, 2]] are 1 and 3.
        const CMatrix m{{2.0, cplx{0, 1}}, {cplx{0, -1}, 2.0}};
        const auto ev = hermitian_eigenvalues(m);
        return bound("Jacobi spectrum of a Hermitian matrix",
                     std::abs(ev[0] - 1.0) + std::abs(ev[1] - 3.0), 1e-12);
    });

    guarded("builders produce Hermitian H", [] {
        SpFWMParams sp;
        sp.ri_omega = 0.1;
        sp.alpha_s = sp.alpha_i = 0.01;
        BSParams bs;
        bs.n_max = 2;
        bs.ri_shift = bs.ri_shift_minus_sep = bs.ri_shift_plus_sep = 0.1;
        const double e = std::max(hermiticity_error(build_spfwm(sp).hamiltonian.matrix()),
                                  hermiticity_error(build_bragg(bs).hamiltonian.matrix()));
        return bound("builders produce Hermitian H", e, 1e-12);
    });

    guarded("generator is trace-free and Hermiticity-preserving", [] {
        std::mt19937_64 rng(7);
        SpFWMParams sp;
        sp.n_max = 3;
        sp.ri_omega = 0.1;
        sp.alpha_s = 0.02;
        sp.alpha_i = 0.01;
        const auto sys = build_spfwm(sp);
        const auto rho = random_state(sys.space, rng);
        const auto d = lindblad_rhs(sys, rho);
        return bound("generator is trace-free and Hermiticity-preserving",
                     std::abs(trace(d)) + hermiticity_error(d), 1e-12);
    });

    guarded("BS vacuum is a fixed point", [] {
        BSParams bs;
        bs.alpha_s = bs.alpha_i = 0.01;
        bs.ri_shift = bs.ri_shift_minus_sep = bs.ri_shift_plus_sep = 0.1;
        const auto sys = build_bragg(bs);
        const auto d = lindblad_rhs(sys, DensityMatrix::vacuum(sys.space));
        return bound("BS vacuum is a fixed point", frobenius_norm(d), 1e-14);
    });

    guarded("SpFWM vacuum is not a fixed point", [] {
        const auto sys = build_spfwm(SpFWMParams{});
        const auto d = lindblad_rhs(sys, DensityMatrix::vacuum(sys.space));
        const double n = frobenius_norm(d);
        return CheckResult{"SpFWM vacuum is not a fixed point", n > 0.1, "norm " + sci(n)};
    });

    guarded("BS ideal transfer sin^2(2z)", [] {
        BSParams bs;
        bs.rr_shift_minus_sep = bs.rr_shift_plus_sep = 1.0;
        auto sys = build_bragg(bs);
        sys = rotating_frame(sys, mode_wavenumbers(sys));
        IntegratorConfig cfg;
        const auto t = propagate(sys, DensityMatrix::fock(sys.space, {1, 0}), 1.0, cfg, 11);
        double err = 0.0;
        for (std::size_t k = 0; k < t.z_km.size(); ++k) {
            const double s = std::sin(2.0 * t.z_km[k]);
            err = std::max(err, std::abs(t.records[k].joint->at(0, 1) - s * s));
        }
        return bound("BS ideal transfer sin^2(2z)", err, 1e-6);
    });

    guarded("lossy propagation keeps trace, Hermiticity, positivity", [] {
        SpFWMParams sp;
        sp.n_max = 4;
        sp.power = 0.2;
        sp.alpha_s = sp.alpha_i = 0.01;
        sp.ri_omega = 0.1;
        const auto sys = build_spfwm(sp);
        IntegratorConfig cfg;
        cfg.step_km = 1e-2;
        const auto t = propagate(sys, DensityMatrix::vacuum(sys.space), 1.0, cfg, 5);
        const bool ok = t.worst.trace_err <= 1e-9 && t.worst.herm_err <= 1e-10 && t.worst.min_eig >= -1e-8;
        return CheckResult{"lossy propagation keeps trace, Hermiticity, positivity", ok,
                           "trace " + sci(t.worst.trace_err) + ", herm " + sci(t.worst.herm_err) +
                               ", min eig " + sci(t.worst.min_eig)};
    });

    guarded("pump power constant without Raman gain", [] {
        MultimodeParams g;
        g.mode_freqs = {-1e12, 0.0, 1e12};
        g.delta_w = 1e12;
        g.raman_rr.assign(5, 1.0);
        g.raman_ri.assign(5, 0.0);
        g.beta.assign(3, 0.0);
        g.alpha.assign(3, 0.0);
        g.n_max.assign(3, 1);
        const double p = pump_depletion(1.0, 10.0, g);
        return CheckResult{"pump power constant without Raman gain", p == 1.0, "P(10 km) = " + sci(p)};
    });

    guarded("config render/parse round trip", [] {
        const char* text =
            "model = bs\nbs.gamma = 1\nbs.power = 1\nbs.alpha = 0.01\nbs.ri = 0.1\nbs.length_km = 5\n"
            "initial.state = fock\ninitial.fock = 1, 0\n";
        const auto c = parse_config(text);
        const bool ok = parse_config(render_config(c)) == c && c.bs.alpha_i == 0.01 && c.bs.ri_shift == 0.1;
        return CheckResult{"config render/parse round trip", ok, ok ? "identical" : "mismatch"};
    });

    return out;
}

}  // namespace fiberq
