#pragma once

// Classical-limit counterparts of the quantum engine: the mean-field
// evolution of the grid amplitudes A_w (triple moments factorized as
// A* A A), spontaneous-Raman pump depletion, and the closed first-moment
// equations of the two reduced models.

#include <array>
#include <span>
#include <vector>

#include "fiberq/models.hpp"

namespace fiberq {

struct MeanFieldConfig {
    double step_km = 1e-3;
    bool include_self_steepening = true;
    bool include_sprs_loss = true;

    void validate() const;
};

/// Per-grid-mode amplitudes in sqrt(W)*s.
struct SpectralField {
    std::vector<cplx> amplitudes;
};

/// Checks the grid tables for use by the mean-field solver, including the
/// requirement that R^I vanish at detunings mu >= omega0 / 2.
void validate_mean_field_grid(const MultimodeParams& grid);

/// dA_w/dz =
///   (-alpha_w/2 + i beta_w) A_w
///   + i gt s_w sum_{w', mu} R_mu A*_{w'} A_{w-mu} A_{w'+mu} dw^2
///   - gt s_w [sum_{mu>0} R^I_mu hbar (omega - mu) dw] A_w
/// with s_w = 1 + w/omega0 (or 1 when self-steepening is off), R = R^R + iR^I,
/// and out-of-grid indices dropped. Pump substitutions in the grid are ignored.
std::vector<cplx> mean_field_rhs(const MultimodeParams& grid, const SpectralField& field,
                                 const MeanFieldConfig& config);

struct MeanFieldTrajectory {
    std::vector<double> z_km;
    std::vector<SpectralField> fields;
};

MeanFieldTrajectory integrate_mean_field(const MultimodeParams& grid, const SpectralField& initial,
                                         double length_km, const MeanFieldConfig& config,
                                         std::span<const double> sample_points);

/// 2 gt sum_{mu>0} R^I_mu hbar (omega0 - mu) dw, in km^-1.
double sprs_depletion_rate(const MultimodeParams& grid);

/// P0 exp(-rate z) for the pump at omega0.
double pump_depletion(double p0_w, double z_km, const MultimodeParams& grid);

/// First moments of the reduced models.
struct ReducedMoments {
    cplx b_s;
    cplx b_i;
};

struct ReducedMeanFieldTrajectory {
    std::vector<double> z_km;
    std::vector<ReducedMoments> moments;
};

/// Drop the k_s n_s + k_i n_i terms (equivalent to the rotating frame).
struct ReducedOptions {
    bool rotating_frame = false;
    double step_km = 1e-3;
};

/// Linear 2x2 generator of the first moments:
///   BS:    d/dz (<b_s>, <b_i>)
///   SpFWM: d/dz (<b_s>, <b_i^dag>)
std::array<std::array<cplx, 2>, 2> reduced_moment_matrix(const BSParams& p, const ReducedOptions& opt);
std::array<std::array<cplx, 2>, 2> reduced_moment_matrix(const SpFWMParams& p, const ReducedOptions& opt);

ReducedMeanFieldTrajectory reduced_mean_field(const BSParams& p, ReducedMoments initial,
                                              const ReducedOptions& opt,
                                              std::span<const double> sample_points);
ReducedMeanFieldTrajectory reduced_mean_field(const SpFWMParams& p, ReducedMoments initial,
                                              const ReducedOptions& opt,
                                              std::span<const double> sample_points);

}  // namespace fiberq
