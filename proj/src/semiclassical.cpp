#include "fiberq/semiclassical.hpp"

#include <array>
#include <cmath>

#include "fiberq/errors.hpp"

namespace fiberq {

void MeanFieldConfig::validate() const {
    if (!(step_km > 0.0)) throw ParameterError("mean field: step_km must be > 0");
}

void validate_mean_field_grid(const MultimodeParams& grid) {
    grid.validate();
    const long m = static_cast<long>(grid.mode_count());
    for (long j = 1; j < m; ++j) {
        const double mu = static_cast<double>(j) * grid.delta_w;
        if (mu >= 0.5 * grid.omega0 && grid.ri(j) != 0.0)
            throw ParameterError("mean field: R^I must vanish for detunings >= omega0/2 (index " +
                                 std::to_string(j) + ")");
    }
}

std::vector<cplx> mean_field_rhs(const MultimodeParams& grid, const SpectralField& field,
                                 const MeanFieldConfig& config) {
    const long m = static_cast<long>(grid.mode_count());
    if (field.amplitudes.size() != grid.mode_count())
        throw DimensionError("mean_field_rhs: one amplitude per grid mode required");
    const auto& a = field.amplitudes;
    const double gt = grid.gamma_tilde();
    const double dw = grid.delta_w;
    const cplx iu{0.0, 1.0};

    double sprs_sum_base = 0.0;  // sum_{j>0} R^I_j dw (multiplies hbar*omega)
    double sprs_sum_mu = 0.0;    // sum_{j>0} R^I_j mu_j dw
    for (long j = 1; j < m; ++j) {
        sprs_sum_base += grid.ri(j) * dw;
        sprs_sum_mu += grid.ri(j) * static_cast<double>(j) * dw * dw;
    }

    std::vector<cplx> out(a.size());
    for (long p = 0; p < m; ++p) {
        const auto pu = static_cast<std::size_t>(p);
        const double w = grid.mode_freqs[pu];
        const double s = config.include_self_steepening ? 1.0 + w / grid.omega0 : 1.0;

        cplx d = cplx{-0.5 * grid.alpha[pu], grid.beta[pu]} * a[pu];

        cplx fwm{};
        for (long n = 0; n < m; ++n)
            for (long j = -(m - 1); j <= m - 1; ++j) {
                const long c = p - j;
                const long e = n + j;
                if (c < 0 || c >= m || e < 0 || e >= m) continue;
                const cplx r{grid.rr(j), grid.ri(j)};
                if (r == cplx{}) continue;
                fwm += r * std::conj(a[static_cast<std::size_t>(n)]) * a[static_cast<std::size_t>(c)] *
                       a[static_cast<std::size_t>(e)];
            }
        d += iu * gt * s * fwm * dw * dw;

        if (config.include_sprs_loss) {
            const double omega = grid.omega0 + w;
            const double bracket = grid.hbar * (omega * sprs_sum_base - sprs_sum_mu);
            d -= gt * s * bracket * a[pu];
        }
        out[pu] = d;
    }
    return out;
}

MeanFieldTrajectory integrate_mean_field(const MultimodeParams& grid, const SpectralField& initial,
                                         double length_km, const MeanFieldConfig& config,
                                         std::span<const double> sample_points) {
    validate_mean_field_grid(grid);
    config.validate();
    if (!(length_km >= 0.0)) throw ParameterError("integrate_mean_field: length must be >= 0");

    std::vector<double> samples{0.0};
    for (double z : sample_points) {
        if (z == 0.0 && samples.size() == 1) continue;
        if (z <= samples.back() || z > length_km * (1.0 + 1e-12))
            throw ParameterError("integrate_mean_field: bad sample point " + std::to_string(z));
        samples.push_back(std::min(z, length_km));
    }

    SpectralField f = initial;
    MeanFieldTrajectory traj;
    traj.z_km.push_back(0.0);
    traj.fields.push_back(f);
    const std::size_t n = f.amplitudes.size();

    auto shifted = [&](const SpectralField& base, const std::vector<cplx>& k, double h) {
        SpectralField t = base;
        for (std::size_t q = 0; q < n; ++q) t.amplitudes[q] += h * k[q];
        return t;
    };

    for (std::size_t s = 1; s < samples.size(); ++s) {
        const double span_z = samples[s] - samples[s - 1];
        const auto steps = static_cast<long>(std::ceil(span_z / config.step_km - 1e-9));
        const double h = span_z / static_cast<double>(std::max<long>(steps, 1));
        for (long k = 0; k < steps; ++k) {
            const auto k1 = mean_field_rhs(grid, f, config);
            const auto k2 = mean_field_rhs(grid, shifted(f, k1, 0.5 * h), config);
            const auto k3 = mean_field_rhs(grid, shifted(f, k2, 0.5 * h), config);
            const auto k4 = mean_field_rhs(grid, shifted(f, k3, h), config);
            for (std::size_t q = 0; q < n; ++q)
                f.amplitudes[q] += h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
        traj.z_km.push_back(samples[s]);
        traj.fields.push_back(f);
    }
    return traj;
}

double sprs_depletion_rate(const MultimodeParams& grid) {
    const long m = static_cast<long>(grid.mode_count());
    double sum = 0.0;
    for (long j = 1; j < m; ++j) {
        const double mu = static_cast<double>(j) * grid.delta_w;
        sum += grid.ri(j) * grid.hbar * (grid.omega0 - mu) * grid.delta_w;
    }
    return 2.0 * grid.gamma_tilde() * sum;
}

double pump_depletion(double p0_w, double z_km, const MultimodeParams& grid) {
    if (!(p0_w >= 0.0)) throw ParameterError("pump_depletion: P0 must be >= 0");
    validate_mean_field_grid(grid);
    return p0_w * std::exp(-sprs_depletion_rate(grid) * z_km);
}

// --- reduced first moments -------------------------------------------------

std::array<std::array<cplx, 2>, 2> reduced_moment_matrix(const BSParams& p, const ReducedOptions& opt) {
    p.validate();
    const double gp = p.gamma * p.power;
    const double g = gp * (p.rr_sep + p.rr_shift);
    double ks = p.beta_s + 2.0 * gp * (p.rr_shift + p.rr_shift_minus_sep);
    double ki = p.beta_i + 2.0 * gp * (p.rr_shift + p.rr_shift_plus_sep);
    if (opt.rotating_frame) ks = ki = 0.0;
    const cplx iu{0.0, 1.0};
    // i[b, H] from the hopping Hamiltonian; -1/2 c^2 b from each jump containing b.
    const double raman_s = gp * (p.ri_shift_minus_sep + p.ri_shift);
    const double raman_i = gp * (p.ri_shift_plus_sep + p.ri_shift);
    const double cross = gp * p.ri_shift;
    return {{{iu * ks - 0.5 * p.alpha_s - raman_s, iu * g - cross},
             {iu * g - cross, iu * ki - 0.5 * p.alpha_i - raman_i}}};
}

std::array<std::array<cplx, 2>, 2> reduced_moment_matrix(const SpFWMParams& p, const ReducedOptions& opt) {
    p.validate();
    const double gp = p.gamma * p.power;
    const double g = gp * p.rr_omega;
    double ks = p.beta_s + gp * (1.0 + p.rr_omega);
    double ki = p.beta_i + gp * (1.0 + p.rr_omega);
    if (opt.rotating_frame) ks = ki = 0.0;
    const double c = gp * p.ri_omega;
    const cplx iu{0.0, 1.0};
    // State vector (<b_s>, <b_i^dag>).
    return {{{iu * ks - 0.5 * p.alpha_s - c, iu * g - c},
             {-iu * g + c, -iu * ki - 0.5 * p.alpha_i + c}}};
}

namespace {

ReducedMeanFieldTrajectory integrate_linear(const std::array<std::array<cplx, 2>, 2>& mat,
                                            std::array<cplx, 2> x, double step,
                                            std::span<const double> sample_points,
                                            bool second_is_conjugate) {
    if (!(step > 0.0)) throw ParameterError("reduced_mean_field: step_km must be > 0");
    auto f = [&](const std::array<cplx, 2>& y) {
        return std::array<cplx, 2>{mat[0][0] * y[0] + mat[0][1] * y[1],
                                   mat[1][0] * y[0] + mat[1][1] * y[1]};
    };
    auto emit = [&](const std::array<cplx, 2>& y) {
        return ReducedMoments{y[0], second_is_conjugate ? std::conj(y[1]) : y[1]};
    };
    ReducedMeanFieldTrajectory traj;
    traj.z_km.push_back(0.0);
    traj.moments.push_back(emit(x));
    double z = 0.0;
    for (double target : sample_points) {
        if (target == 0.0 && traj.z_km.size() == 1) continue;
        if (target <= z) throw ParameterError("reduced_mean_field: sample points must increase");
        const auto steps = static_cast<long>(std::ceil((target - z) / step - 1e-9));
        const double h = (target - z) / static_cast<double>(steps);
        for (long k = 0; k < steps; ++k) {
            const auto k1 = f(x);
            const auto k2 = f({x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1]});
            const auto k3 = f({x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1]});
            const auto k4 = f({x[0] + h * k3[0], x[1] + h * k3[1]});
            for (int q = 0; q < 2; ++q) x[q] += h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
        z = target;
        traj.z_km.push_back(z);
        traj.moments.push_back(emit(x));
    }
    return traj;
}

}  // namespace

ReducedMeanFieldTrajectory reduced_mean_field(const BSParams& p, ReducedMoments initial,
                                              const ReducedOptions& opt,
                                              std::span<const double> sample_points) {
    return integrate_linear(reduced_moment_matrix(p, opt), {initial.b_s, initial.b_i}, opt.step_km,
                            sample_points, false);
}

ReducedMeanFieldTrajectory reduced_mean_field(const SpFWMParams& p, ReducedMoments initial,
                                              const ReducedOptions& opt,
                                              std::span<const double> sample_points) {
    return integrate_linear(reduced_moment_matrix(p, opt), {initial.b_s, std::conj(initial.b_i)},
                            opt.step_km, sample_points, true);
}

}  // namespace fiberq
