#pragma once

// Scenario configuration: a line-oriented `key = value` format with `#`
// comments and dotted section keys.
//
//   model = bs                 # bs | spfwm | multimode | semiclassical
//   frame = lab                # lab | rotating (quantum models)
//   bs.gamma = 1
//   bs.power = 1
//   bs.alpha = 0.01            # shorthand for alpha_s and alpha_i
//   bs.ri = 0.1                # shorthand for every R^I entry
//   bs.length_km = 5
//   initial.state = fock       # vacuum | fock | coherent
//   initial.fock = 1, 0
//   integrator.step_km = 1e-3
//   output.samples = 101
//
// The multimode and semiclassical models share the `multimode.*` grid keys.
// See README.md for the full key list.

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fiberq/lindblad.hpp"
#include "fiberq/models.hpp"

namespace fiberq {

enum class ModelKind { bs, spfwm, multimode, semiclassical };
enum class InitialKind { vacuum, fock, coherent };
enum class Frame { lab, rotating };

std::string to_string(ModelKind m);
std::string to_string(InitialKind k);
std::string to_string(Frame f);

struct InitialState {
    InitialKind kind = InitialKind::vacuum;
    std::vector<std::size_t> fock;  ///< one occupation per quantum mode
    std::vector<cplx> coherent;     ///< one amplitude per quantum mode

    bool operator==(const InitialState&) const = default;
};

struct SemiclassicalSettings {
    std::vector<double> initial_power;  ///< W per grid mode
    std::vector<double> initial_phase;  ///< rad per grid mode
    bool self_steepening = true;
    bool sprs_loss = true;

    bool operator==(const SemiclassicalSettings&) const = default;
};

struct OutputSettings {
    std::string dir = ".";
    std::size_t samples = 101;

    bool operator==(const OutputSettings&) const = default;
};

struct ScenarioConfig {
    ModelKind model = ModelKind::bs;
    Frame frame = Frame::lab;
    BSParams bs;
    SpFWMParams spfwm;
    MultimodeParams multimode;
    SemiclassicalSettings semiclassical;
    InitialState initial;
    IntegratorConfig integrator;
    OutputSettings output;

    double length_km() const;
    bool operator==(const ScenarioConfig&) const = default;
};

struct ConfigIssue {
    std::size_t line = 0;  ///< 1-based; 0 when the issue is not tied to a line
    std::string key;
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// Key/value pairs applied after the text, replacing any value it set. The
/// bare key `n_max` targets the selected model (every mode for multimode).
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parses and fully validates. Throws ConfigError listing every problem.
ScenarioConfig parse_config(std::string_view text, const ConfigOverrides& overrides = {});

/// Canonical text for the selected model; parse_config(render_config(c)) == c
/// for configs whose unselected model sections hold defaults.
std::string render_config(const ScenarioConfig& config);

/// Keys accepted for each model's section, for error messages and docs.
std::vector<std::string> required_keys(ModelKind model);

}  // namespace fiberq
