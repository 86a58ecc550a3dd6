#pragma once

// End-to-end execution of a parsed scenario: build the generator, prepare
// the initial state, integrate, and export a trajectory CSV plus a JSON
// summary.
//
// Two-quantum-mode runs (bs, spfwm, multimode with two non-pump modes) write
//   z_km,P_0_0,...,P_nmax_nmax,n_s_mean,n_i_mean,re_b_s,im_b_s,re_b_i,im_b_i,trace_err,min_eig
// Other multimode runs write per-mode columns n_<g>_mean, re_b_<g>, im_b_<g>
// keyed by grid index. Semiclassical runs write power_<g>, re_A_<g>, im_A_<g>
// and total_power.

#include <optional>
#include <string>
#include <vector>

#include "fiberq/config.hpp"
#include "fiberq/observables.hpp"

namespace fiberq {

struct RunSummary {
    ScenarioConfig config;
    double length_km = 0.0;
    std::size_t rows = 0;
    double wall_time_s = 0.0;
    InvariantRecord worst;  ///< quantum models only
    std::vector<std::size_t> quantum_modes;  ///< grid index of each quantum mode
    std::vector<double> final_mean_n;
    std::vector<cplx> final_mean_b;
    std::optional<JointNumberTable> final_joint;
    std::optional<HeraldingMetrics> heralding;
    std::vector<double> final_power_w;  ///< semiclassical only
    std::vector<std::string> notes;
    std::string csv_path;
    std::string summary_path;
};

struct ScenarioResult {
    RunSummary summary;
    std::string csv;
};

/// Runs the scenario in memory. Throws InvariantBreach on integrator abort.
ScenarioResult execute_scenario(const ScenarioConfig& config);

/// execute_scenario, then writes <output.dir>/trajectory.csv and
/// <output.dir>/summary.json (creating the directory).
RunSummary run_scenario(const ScenarioConfig& config);

std::string summary_json(const RunSummary& summary);

}  // namespace fiberq
