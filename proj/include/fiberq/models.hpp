#pragma once

// Generator builders for light propagating in a nonlinear fiber.
//
// Reduced models act on two quantum modes ordered (signal, idler) and are
// written with pumps treated as classical and undepleted. Units: gamma in
// W^-1 km^-1, power in W, alpha/beta/k in km^-1; Raman response values are
// dimensionless.

#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "fiberq/lindblad.hpp"

namespace fiberq {

inline constexpr double kHbar = 1.0545718e-34;                           // J s
inline constexpr double kDefaultOmega0 = 2.0 * std::numbers::pi * 193.1e12;  // rad/s

/// Degenerate spontaneous four-wave mixing: one CW pump at w_p, signal and
/// idler at w_p +/- Omega.
struct SpFWMParams {
    double gamma = 1.0;
    double power = 1.0;
    double alpha_s = 0.0;
    double alpha_i = 0.0;
    double rr_omega = 1.0;  ///< R^R at detuning Omega
    double ri_omega = 0.0;  ///< R^I at detuning Omega
    double beta_p = 0.0;
    double beta_s = 0.0;
    double beta_i = 0.0;
    double length_km = 1.0;
    std::size_t n_max = 6;

    void validate() const;
    bool operator==(const SpFWMParams&) const = default;
};

/// Bragg-scattering frequency translation with two pumps separated by phi
/// and a signal/idler pair (also phi apart) shifted by Phi from the pumps.
/// Naming: `sep` is phi, `shift` is Phi.
struct BSParams {
    double gamma = 1.0;
    double power = 1.0;  ///< per pump
    double alpha_s = 0.0;
    double alpha_i = 0.0;
    double rr_sep = 1.0;               ///< R^R_phi
    double rr_shift = 1.0;             ///< R^R_Phi
    double rr_shift_minus_sep = 1.0;   ///< R^R_{Phi-phi}
    double rr_shift_plus_sep = 1.0;    ///< R^R_{Phi+phi}
    double ri_shift = 0.0;             ///< R^I_Phi
    double ri_shift_minus_sep = 0.0;   ///< R^I_{Phi-phi}
    double ri_shift_plus_sep = 0.0;    ///< R^I_{Phi+phi}
    double beta_s = 0.0;
    double beta_i = 0.0;
    double beta_p1 = 0.0;
    double beta_p2 = 0.0;
    double length_km = 1.0;
    std::size_t n_max = 1;

    void validate() const;
    bool operator==(const BSParams&) const = default;
};

/// A grid mode replaced by a classical undepleted pump with field amplitude
/// `amplitude` (sqrt(W)*s, see pump_amplitude) and wavenumber k_p.
struct PumpSubstitution {
    double amplitude = 0.0;
    double k_p = 0.0;

    bool operator==(const PumpSubstitution&) const = default;
};

/// sqrt(2 pi P) / delta_w: discretized amplitude of a CW pump of power P.
double pump_amplitude(double power_w, double delta_w);

/// Equally spaced frequency grid for the periodic (discretized) master
/// equation. Raman tables are indexed by detuning index j in [-(M-1), M-1]
/// and stored at position j + M - 1.
struct MultimodeParams {
    std::vector<double> mode_freqs;  ///< detunings w_m from omega0, rad/s
    double delta_w = 1.0;            ///< grid spacing, rad/s
    double omega0 = kDefaultOmega0;
    double hbar = kHbar;
    std::vector<double> beta;   ///< km^-1 per mode
    std::vector<double> alpha;  ///< km^-1 per mode
    std::vector<double> raman_rr;
    std::vector<double> raman_ri;
    double gamma = 1.0;
    std::vector<std::size_t> n_max;  ///< per mode; ignored for pump modes
    std::map<std::size_t, PumpSubstitution> pumps;
    double z_eval = 0.0;  ///< km; position at which pump phases e^{i k_p z} are taken
    /// true: photon energy hbar*(omega0 + w_m) in the operator scaling;
    /// false: hbar*omega0 for every mode (narrow-band limit).
    bool exact_photon_energy = true;
    std::size_t dim_cap = 4096;
    double length_km = 1.0;

    std::size_t mode_count() const noexcept { return mode_freqs.size(); }
    double rr(long j) const;
    double ri(long j) const;
    double gamma_tilde() const;  ///< gamma / 2pi

    void validate() const;
    bool operator==(const MultimodeParams&) const = default;
};

/// Multimode build result. The system acts on the non-pump grid modes in
/// grid order.
struct MultimodeSystem {
    LindbladSystem system;
    std::vector<std::size_t> quantum_modes;  ///< grid index of each system mode
    double discarded_constant = 0.0;         ///< identity part dropped from H, km^-1
    std::vector<std::string> notes;
};

struct WaveNumber {
    std::string wave;
    double k = 0.0;
};

struct PhaseMatchReport {
    std::vector<WaveNumber> k;
    double mismatch = 0.0;  ///< km^-1
    bool matched = false;

    double at(const std::string& wave) const;
};

LindbladSystem build_spfwm(const SpFWMParams& params);
LindbladSystem build_bragg(const BSParams& params);
MultimodeSystem build_multimode(const MultimodeParams& params);

/// SpFWM: k_p = beta_p + gamma P, k_x = beta_x + gamma P (1 + R^R_Omega),
/// mismatch = 2 k_p - k_s - k_i.
PhaseMatchReport phase_match(const SpFWMParams& params);
/// BS: k_px = beta_px + gamma P (2 + R^R_phi),
/// k_s = beta_s + 2 gamma P (R^R_Phi + R^R_{Phi-phi}),
/// k_i = beta_i + 2 gamma P (R^R_Phi + R^R_{Phi+phi}),
/// mismatch = k_p1 - k_p2 + k_i - k_s.
PhaseMatchReport phase_match(const BSParams& params);

/// Coefficient of n_m in H for each mode, read off single-excitation
/// diagonal elements relative to vacuum.
std::vector<double> mode_wavenumbers(const LindbladSystem& system);

/// Frame change b_m = e^{-i k_m z} a_m evaluated at position z:
///   H -> V H V^dag - sum_m k_m n_m,   L -> V L V^dag (rephased),
/// with V = exp(-i z sum_m k_m n_m). Jumps are returned with their first
/// nonzero entry real and positive.
LindbladSystem rotating_frame(const LindbladSystem& system, std::span<const double> k_shifts,
                              double z_km = 0.0);

/// V X V^dag for the frame unitary above.
Operator frame_conjugate(const Operator& op, std::span<const double> k_shifts, double z_km);

/// Multiplies the operator by the unit phase that makes its first nonzero
/// entry (row-major) real and positive.
Operator rephase(const Operator& op);

}  // namespace fiberq
