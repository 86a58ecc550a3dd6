#include "fiberq/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fiberq/errors.hpp"

namespace fiberq {

namespace {

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ParameterError(std::string(name) + " must be finite and >= 0 (got " +
                             std::to_string(v) + ")");
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ParameterError(std::string(name) + " must be finite");
}

Jump make_jump(std::string label, double scale, const Operator& bare) {
    return {std::move(label), scale, cplx{scale} * bare};
}

Operator hermitian_part(const Operator& h) {
    return cplx{0.5} * (h + dagger(h));
}

}  // namespace

// --- parameter validation --------------------------------------------------

void SpFWMParams::validate() const {
    require_nonnegative(gamma, "spfwm.gamma");
    require_nonnegative(power, "spfwm.power");
    require_nonnegative(alpha_s, "spfwm.alpha_s");
    require_nonnegative(alpha_i, "spfwm.alpha_i");
    require_nonnegative(ri_omega, "spfwm.ri_omega");
    require_nonnegative(length_km, "spfwm.length_km");
    require_finite(rr_omega, "spfwm.rr_omega");
    require_finite(beta_p, "spfwm.beta_p");
    require_finite(beta_s, "spfwm.beta_s");
    require_finite(beta_i, "spfwm.beta_i");
}

void BSParams::validate() const {
    require_nonnegative(gamma, "bs.gamma");
    require_nonnegative(power, "bs.power");
    require_nonnegative(alpha_s, "bs.alpha_s");
    require_nonnegative(alpha_i, "bs.alpha_i");
    require_nonnegative(ri_shift, "bs.ri_shift");
    require_nonnegative(ri_shift_minus_sep, "bs.ri_shift_minus_sep");
    require_nonnegative(ri_shift_plus_sep, "bs.ri_shift_plus_sep");
    require_nonnegative(length_km, "bs.length_km");
    for (double v : {rr_sep, rr_shift, rr_shift_minus_sep, rr_shift_plus_sep, beta_s, beta_i,
                     beta_p1, beta_p2})
        require_finite(v, "bs parameter");
}

double pump_amplitude(double power_w, double delta_w) {
    require_nonnegative(power_w, "pump power");
    if (!(delta_w > 0.0)) throw ParameterError("delta_w must be > 0");
    return std::sqrt(2.0 * std::numbers::pi * power_w) / delta_w;
}

double MultimodeParams::rr(long j) const {
    const long m = static_cast<long>(mode_count());
    if (j <= -m || j >= m) return 0.0;
    return raman_rr.at(static_cast<std::size_t>(j + m - 1));
}

double MultimodeParams::ri(long j) const {
    const long m = static_cast<long>(mode_count());
    if (j <= -m || j >= m) return 0.0;
    return raman_ri.at(static_cast<std::size_t>(j + m - 1));
}

double MultimodeParams::gamma_tilde() const { return gamma / (2.0 * std::numbers::pi); }

void MultimodeParams::validate() const {
    const std::size_t m = mode_count();
    if (m == 0) throw ParameterError("multimode: at least one grid mode required");
    if (!(delta_w > 0.0)) throw ParameterError("multimode.delta_w must be > 0");
    if (!(omega0 > 0.0)) throw ParameterError("multimode.omega0 must be > 0");
    if (!(hbar > 0.0)) throw ParameterError("multimode.hbar must be > 0");
    require_nonnegative(gamma, "multimode.gamma");
    for (std::size_t k = 1; k < m; ++k) {
        const double step = mode_freqs[k] - mode_freqs[k - 1];
        if (std::abs(step - delta_w) > 1e-9 * delta_w)
            throw ParameterError("multimode.mode_freqs must be spaced by delta_w (mode " +
                                 std::to_string(k) + ")");
    }
    if (beta.size() != m) throw ParameterError("multimode.beta needs one value per mode");
    if (alpha.size() != m) throw ParameterError("multimode.alpha needs one value per mode");
    if (n_max.size() != m) throw ParameterError("multimode.n_max needs one value per mode");
    for (double a : alpha) require_nonnegative(a, "multimode.alpha");
    for (double b : beta) require_finite(b, "multimode.beta");
    if (raman_rr.size() != 2 * m - 1 || raman_ri.size() != 2 * m - 1)
        throw ParameterError("multimode Raman tables need 2M-1 = " + std::to_string(2 * m - 1) +
                             " entries");
    for (long j = 0; j < static_cast<long>(m); ++j) {
        const double rp = rr(j), rn = rr(-j), ip = ri(j), in = ri(-j);
        require_finite(rp, "multimode.raman_rr");
        require_finite(ip, "multimode.raman_ri");
        if (std::abs(rp - rn) > 1e-12 * (1.0 + std::abs(rp)))
            throw ParameterError("multimode.raman_rr must be even in detuning (index " +
                                 std::to_string(j) + ")");
        if (std::abs(ip + in) > 1e-12 * (1.0 + std::abs(ip)))
            throw ParameterError("multimode.raman_ri must be odd in detuning (index " +
                                 std::to_string(j) + ")");
        if (j > 0 && ip < 0.0)
            throw ParameterError("multimode.raman_ri must be >= 0 at positive detuning (index " +
                                 std::to_string(j) + ")");
    }
    for (const auto& [idx, pump] : pumps) {
        if (idx >= m) throw ParameterError("multimode pump index out of range");
        require_nonnegative(pump.amplitude, "multimode pump amplitude");
        require_finite(pump.k_p, "multimode pump k_p");
    }
    if (pumps.size() == m) throw ParameterError("multimode: every grid mode is a pump");
}

double PhaseMatchReport::at(const std::string& wave) const {
    for (const auto& w : k)
        if (w.wave == wave) return w.k;
    throw std::out_of_range("PhaseMatchReport: no wave named " + wave);
}

// --- phase matching --------------------------------------------------------

PhaseMatchReport phase_match(const SpFWMParams& p) {
    const double gp = p.gamma * p.power;
    const double kp = p.beta_p + gp;
    const double ks = p.beta_s + gp * (1.0 + p.rr_omega);
    const double ki = p.beta_i + gp * (1.0 + p.rr_omega);
    PhaseMatchReport r;
    r.k = {{"p", kp}, {"s", ks}, {"i", ki}};
    r.mismatch = 2.0 * kp - ks - ki;
    const double scale = std::max({std::abs(kp), std::abs(ks), std::abs(ki), 1.0});
    r.matched = std::abs(r.mismatch) <= 1e-12 * scale;
    return r;
}

PhaseMatchReport phase_match(const BSParams& p) {
    const double gp = p.gamma * p.power;
    const double kp1 = p.beta_p1 + gp * (2.0 + p.rr_sep);
    const double kp2 = p.beta_p2 + gp * (2.0 + p.rr_sep);
    const double ks = p.beta_s + 2.0 * gp * (p.rr_shift + p.rr_shift_minus_sep);
    const double ki = p.beta_i + 2.0 * gp * (p.rr_shift + p.rr_shift_plus_sep);
    PhaseMatchReport r;
    r.k = {{"p1", kp1}, {"p2", kp2}, {"s", ks}, {"i", ki}};
    r.mismatch = kp1 - kp2 + ki - ks;
    const double scale = std::max({std::abs(kp1), std::abs(kp2), std::abs(ks), std::abs(ki), 1.0});
    r.matched = std::abs(r.mismatch) <= 1e-12 * scale;
    return r;
}

// --- reduced models --------------------------------------------------------

LindbladSystem build_spfwm(const SpFWMParams& p) {
    p.validate();
    const auto space = CompositeSpace::uniform(2, p.n_max);
    const ModeSpace mode{p.n_max};
    const auto a = annihilation_op(mode);
    const auto b_s = embed(a, 0, space);
    const auto b_i = embed(a, 1, space);
    const auto n_s = embed(number_op(mode), 0, space);
    const auto n_i = embed(number_op(mode), 1, space);

    const auto pm = phase_match(p);
    const double coupling = p.gamma * p.power * p.rr_omega;

    Operator h = cplx{pm.at("s")} * n_s + cplx{pm.at("i")} * n_i +
                 cplx{coupling} * (dagger(b_s) * dagger(b_i) + b_s * b_i);

    LindbladSystem sys{space, hermitian_part(h), {}};
    sys.jumps.push_back(make_jump("loss_s", std::sqrt(p.alpha_s), b_s));
    sys.jumps.push_back(make_jump("loss_i", std::sqrt(p.alpha_i), b_i));
    const double raman = 2.0 * p.gamma * p.power * p.ri_omega;
    if (raman > 0.0) sys.jumps.push_back(make_jump("raman", std::sqrt(raman), b_s + dagger(b_i)));
    return sys;
}

LindbladSystem build_bragg(const BSParams& p) {
    p.validate();
    const auto space = CompositeSpace::uniform(2, p.n_max);
    const ModeSpace mode{p.n_max};
    const auto a = annihilation_op(mode);
    const auto b_s = embed(a, 0, space);
    const auto b_i = embed(a, 1, space);
    const auto n_s = embed(number_op(mode), 0, space);
    const auto n_i = embed(number_op(mode), 1, space);

    const auto pm = phase_match(p);
    const double gp = p.gamma * p.power;
    const double coupling = gp * (p.rr_sep + p.rr_shift);

    Operator h = cplx{pm.at("s")} * n_s + cplx{pm.at("i")} * n_i +
                 cplx{coupling} * (dagger(b_s) * b_i + dagger(b_i) * b_s);

    LindbladSystem sys{space, hermitian_part(h), {}};
    sys.jumps.push_back(make_jump("loss_s", std::sqrt(p.alpha_s), b_s));
    sys.jumps.push_back(make_jump("loss_i", std::sqrt(p.alpha_i), b_i));
    if (p.ri_shift_minus_sep > 0.0)
        sys.jumps.push_back(make_jump("raman_s", std::sqrt(2.0 * gp * p.ri_shift_minus_sep), b_s));
    if (p.ri_shift_plus_sep > 0.0)
        sys.jumps.push_back(make_jump("raman_i", std::sqrt(2.0 * gp * p.ri_shift_plus_sep), b_i));
    if (p.ri_shift > 0.0)
        sys.jumps.push_back(make_jump("raman_si", std::sqrt(2.0 * gp * p.ri_shift), b_s + b_i));
    return sys;
}

// --- multimode -------------------------------------------------------------

namespace {

struct Ladder {
    std::size_t mode;  // position in the composite space
    bool create;
};

/// out += coef * (ops[0] ops[1] ... ops[k-1]) built by acting on each basis
/// column with the ladder operators right to left. Creation at the
/// truncation edge gives zero, matching the truncated matrices.
void accumulate_monomial(CMatrix& out, const CompositeSpace& space, cplx coef,
                         std::span<const Ladder> ops) {
    if (coef == cplx{}) return;
    const std::size_t d = space.total_dim();
    std::vector<std::size_t> occ;
    for (std::size_t col = 0; col < d; ++col) {
        occ = space.occupation(col);
        double amp = 1.0;
        bool alive = true;
        for (std::size_t k = ops.size(); k-- > 0;) {
            auto& n = occ[ops[k].mode];
            if (ops[k].create) {
                if (n == space.modes()[ops[k].mode].n_max) {
                    alive = false;
                    break;
                }
                ++n;
                amp *= std::sqrt(static_cast<double>(n));
            } else {
                if (n == 0) {
                    alive = false;
                    break;
                }
                amp *= std::sqrt(static_cast<double>(n));
                --n;
            }
        }
        if (alive) out(space.index(occ), col) += coef * amp;
    }
}

/// One grid mode seen either as a classical c-number or a scaled quantum
/// ladder operator.
struct GridField {
    bool quantum = false;
    std::size_t position = 0;  // in the composite space, if quantum
    cplx amplitude;            // classical amplitude at z_eval
    double scale = 0.0;        // sqrt(hbar omega / delta_w), if quantum
};

}  // namespace

MultimodeSystem build_multimode(const MultimodeParams& p) {
    p.validate();
    const std::size_t m = p.mode_count();
    const long ml = static_cast<long>(m);
    const cplx iu{0.0, 1.0};

    MultimodeSystem result;
    std::vector<GridField> field(m);
    std::vector<ModeSpace> modes;
    for (std::size_t g = 0; g < m; ++g) {
        const double omega = p.exact_photon_energy ? p.omega0 + p.mode_freqs[g] : p.omega0;
        if (auto it = p.pumps.find(g); it != p.pumps.end()) {
            field[g].quantum = false;
            field[g].amplitude = it->second.amplitude * std::exp(iu * (it->second.k_p * p.z_eval));
            // Dispersion of a classical pump only shifts H by a constant.
            result.discarded_constant +=
                p.beta[g] / (p.hbar * omega) * std::norm(field[g].amplitude) * p.delta_w;
            if (p.alpha[g] > 0.0)
                result.notes.push_back("pump mode " + std::to_string(g) +
                                       ": loss ignored (classical undepleted pump)");
        } else {
            field[g].quantum = true;
            field[g].position = modes.size();
            field[g].scale = std::sqrt(p.hbar * omega / p.delta_w);
            modes.push_back(ModeSpace{p.n_max[g]});
            result.quantum_modes.push_back(g);
            if (p.n_max[g] == 0)
                result.notes.push_back("grid mode " + std::to_string(g) +
                                       " has n_max = 0 (frozen vacuum spectator)");
        }
    }

    CompositeSpace space(modes);
    if (space.total_dim() > p.dim_cap) {
        std::ostringstream os;
        os << "multimode: total dimension " << space.total_dim() << " exceeds dim_cap "
           << p.dim_cap << "; raise the cap to at least " << space.total_dim();
        throw ParameterError(os.str());
    }
    const bool substituted = !p.pumps.empty();
    const std::size_t d = space.total_dim();

    // Dispersion: beta_m/(hbar w_m) A^dag A dw reduces to beta_m n_m exactly.
    CMatrix h(d, d);
    for (std::size_t g = 0; g < m; ++g) {
        if (!field[g].quantum) continue;
        const std::vector<Ladder> ops{{field[g].position, true}, {field[g].position, false}};
        accumulate_monomial(h, space, p.beta[g], ops);
    }

    // Four-wave mixing: sum_{m,n,j} gt R^R_j/(2 hbar w0) A^dag_m A^dag_n A_{m-j} A_{n+j} dw^3,
    // open boundary. With pumps substituted only terms with one or two quantum
    // factors are kept.
    const double fwm_prefactor =
        p.gamma_tilde() / (2.0 * p.hbar * p.omega0) * p.delta_w * p.delta_w * p.delta_w;
    std::vector<Ladder> ops;
    for (long a = 0; a < ml; ++a)
        for (long b = 0; b < ml; ++b)
            for (long j = -(ml - 1); j <= ml - 1; ++j) {
                const long c = a - j;
                const long e = b + j;
                if (c < 0 || c >= ml || e < 0 || e >= ml) continue;
                const double r = p.rr(j);
                if (r == 0.0) continue;
                const std::size_t idx[4] = {static_cast<std::size_t>(a), static_cast<std::size_t>(b),
                                            static_cast<std::size_t>(c), static_cast<std::size_t>(e)};
                const bool creates[4] = {true, true, false, false};
                cplx coef = fwm_prefactor * r;
                ops.clear();
                for (int t = 0; t < 4; ++t) {
                    const auto& f = field[idx[t]];
                    if (f.quantum) {
                        coef *= f.scale;
                        ops.push_back({f.position, creates[t]});
                    } else {
                        coef *= creates[t] ? std::conj(f.amplitude) : f.amplitude;
                    }
                }
                if (ops.empty()) {
                    result.discarded_constant += coef.real();
                    continue;
                }
                if (substituted && ops.size() > 2) continue;
                accumulate_monomial(h, space, coef, ops);
            }

    Operator hamiltonian(space, h);
    result.system = LindbladSystem{space, hermitian_part(hamiltonian), {}};

    // Loss: sqrt(alpha_m / hbar w_m) A_m with weight dw -> sqrt(alpha_m) a_m.
    for (std::size_t g = 0; g < m; ++g) {
        if (!field[g].quantum) continue;
        CMatrix l(d, d);
        const std::vector<Ladder> one{{field[g].position, false}};
        accumulate_monomial(l, space, std::sqrt(p.alpha[g]), one);
        result.system.jumps.push_back(
            {"loss[" + std::to_string(g) + "]", std::sqrt(p.alpha[g]), Operator(space, std::move(l))});
    }

    // Raman: sum_m sqrt(2 gt R^I_n / hbar w0) A^dag_{m-n} A_m dw, weight dw, n > 0.
    for (long n = 1; n < ml; ++n) {
        const double ri = p.ri(n);
        if (ri == 0.0) continue;
        const double scale = std::sqrt(2.0 * p.gamma_tilde() * ri / (p.hbar * p.omega0)) *
                             p.delta_w * std::sqrt(p.delta_w);
        CMatrix l(d, d);
        cplx dropped_constant{};
        for (long a = n; a < ml; ++a) {
            const auto& fc = field[static_cast<std::size_t>(a - n)];
            const auto& fa = field[static_cast<std::size_t>(a)];
            cplx coef = scale;
            ops.clear();
            if (fc.quantum) {
                coef *= fc.scale;
                ops.push_back({fc.position, true});
            } else {
                coef *= std::conj(fc.amplitude);
            }
            if (fa.quantum) {
                coef *= fa.scale;
                ops.push_back({fa.position, false});
            } else {
                coef *= fa.amplitude;
            }
            if (ops.empty()) {
                dropped_constant += coef;
                continue;
            }
            if (substituted && ops.size() > 1) continue;
            accumulate_monomial(l, space, coef, ops);
        }
        if (dropped_constant != cplx{}) {
            std::ostringstream os;
            os << "raman[" << n << "]: dropped c-number pump-pump term of magnitude "
               << std::abs(dropped_constant);
            result.notes.push_back(os.str());
        }
        if (frobenius_norm(l) == 0.0) continue;
        result.system.jumps.push_back(
            {"raman[" + std::to_string(n) + "]", scale, Operator(space, std::move(l))});
    }
    return result;
}

// --- frames ----------------------------------------------------------------

std::vector<double> mode_wavenumbers(const LindbladSystem& system) {
    const auto& space = system.space;
    const auto& h = system.hamiltonian.matrix();
    std::vector<double> k(space.mode_count(), 0.0);
    std::vector<std::size_t> occ(space.mode_count(), 0);
    for (std::size_t mdx = 0; mdx < space.mode_count(); ++mdx) {
        if (space.modes()[mdx].n_max == 0) continue;
        occ.assign(space.mode_count(), 0);
        occ[mdx] = 1;
        const std::size_t e = space.index(occ);
        k[mdx] = (h(e, e) - h(0, 0)).real();
    }
    return k;
}

namespace {

std::vector<cplx> frame_phases(const CompositeSpace& space, std::span<const double> k_shifts,
                               double z) {
    if (k_shifts.size() != space.mode_count())
        throw DimensionError("rotating_frame: one shift per mode required");
    std::vector<cplx> v(space.total_dim());
    for (std::size_t flat = 0; flat < v.size(); ++flat) {
        const auto occ = space.occupation(flat);
        double phase = 0.0;
        for (std::size_t m = 0; m < occ.size(); ++m) phase += k_shifts[m] * static_cast<double>(occ[m]);
        v[flat] = std::exp(cplx{0.0, -phase * z});
    }
    return v;
}

}  // namespace

Operator frame_conjugate(const Operator& op, std::span<const double> k_shifts, double z_km) {
    const auto v = frame_phases(op.space(), k_shifts, z_km);
    CMatrix m = op.matrix();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) *= v[r] * std::conj(v[c]);
    return {op.space(), std::move(m)};
}

Operator rephase(const Operator& op) {
    const auto data = op.matrix().data();
    double peak = 0.0;
    for (const auto& x : data) peak = std::max(peak, std::abs(x));
    for (const auto& x : data) {
        if (std::abs(x) > 1e-14 * peak) {
            const cplx phase = std::conj(x) / std::abs(x);
            return phase * op;
        }
    }
    return op;
}

LindbladSystem rotating_frame(const LindbladSystem& system, std::span<const double> k_shifts,
                              double z_km) {
    const auto& space = system.space;
    if (k_shifts.size() != space.mode_count())
        throw DimensionError("rotating_frame: one shift per mode required");
    Operator h = frame_conjugate(system.hamiltonian, k_shifts, z_km);
    for (std::size_t flat = 0; flat < space.total_dim(); ++flat) {
        const auto occ = space.occupation(flat);
        double shift = 0.0;
        for (std::size_t m = 0; m < occ.size(); ++m) shift += k_shifts[m] * static_cast<double>(occ[m]);
        h.matrix()(flat, flat) -= shift;
    }
    LindbladSystem out{space, hermitian_part(h), {}};
    for (const auto& j : system.jumps)
        out.jumps.push_back({j.label, j.scale, rephase(frame_conjugate(j.op, k_shifts, z_km))});
    return out;
}

}  // namespace fiberq
