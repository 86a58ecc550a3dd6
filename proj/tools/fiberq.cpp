// fiberq: run master-equation scenarios from a config file.
//
//   fiberq run-bs --config bs.cfg --output out/ [--step km] [--nmax n] [--samples n]
//   fiberq run-spfwm --config sp.cfg --sweep spfwm.power=0.5,1,2
//   fiberq validate
//
// Exit codes: 0 success, 1 config error, 2 invariant abort.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fiberq/config.hpp"
#include "fiberq/errors.hpp"
#include "fiberq/scenario.hpp"
#include "fiberq/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kInvariantAbort = 2;

struct RunOptions {
    std::string config_path;
    std::string output;
    double step = 0.0;
    long nmax = -1;
    long samples = -1;
    std::string sweep;
    unsigned jobs = 0;
};

std::mutex io_mutex;

void say(std::ostream& os, const std::string& msg) {
    std::lock_guard lock(io_mutex);
    os << msg << std::endl;
}

std::string declared_model(const std::string& text) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        line = line.substr(0, line.find('#'));
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        if (trim(line.substr(0, eq)) == "model") return trim(line.substr(eq + 1));
    }
    return {};
}

int run_one(const std::string& text, fiberq::ConfigOverrides overrides, const std::string& label) {
    fiberq::ScenarioConfig cfg;
    try {
        cfg = fiberq::parse_config(text, overrides);
    } catch (const fiberq::ConfigError& e) {
        say(std::cerr, label + e.what());
        return kConfigError;
    }
    try {
        const auto s = fiberq::run_scenario(cfg);
        std::ostringstream os;
        os << label << "wrote " << s.csv_path << " (" << s.rows << " rows) and " << s.summary_path
           << " in " << s.wall_time_s << " s";
        say(std::cout, os.str());
        return kOk;
    } catch (const fiberq::InvariantBreach& e) {
        say(std::cerr, label + e.what());
        return kInvariantAbort;
    } catch (const std::invalid_argument& e) {
        say(std::cerr, label + "invalid scenario: " + e.what());
        return kConfigError;
    }
}

int run_model(const std::string& model, const RunOptions& opt) {
    std::ifstream f(opt.config_path);
    if (!f) {
        std::cerr << "cannot read config file " << opt.config_path << "\n";
        return kConfigError;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    const auto declared = declared_model(text);
    if (!declared.empty() && declared != model) {
        std::cerr << "config declares model = " << declared << " but the subcommand runs " << model << "\n";
        return kConfigError;
    }

    fiberq::ConfigOverrides base{{"model", model}};
    if (opt.step > 0.0) {
        std::ostringstream os;
        os.precision(17);
        os << opt.step;
        base.emplace_back("integrator.step_km", os.str());
    }
    if (opt.nmax >= 0) base.emplace_back("n_max", std::to_string(opt.nmax));
    if (opt.samples >= 0) base.emplace_back("output.samples", std::to_string(opt.samples));
    if (!opt.output.empty()) base.emplace_back("output.dir", opt.output);

    if (opt.sweep.empty()) return run_one(text, base, "");

    const auto eq = opt.sweep.find('=');
    if (eq == std::string::npos || eq == 0) {
        std::cerr << "--sweep expects key=v1,v2,...\n";
        return kConfigError;
    }
    const std::string key = opt.sweep.substr(0, eq);
    std::vector<std::string> values;
    std::istringstream vs(opt.sweep.substr(eq + 1));
    for (std::string v; std::getline(vs, v, ',');)
        if (!v.empty()) values.push_back(v);
    if (values.empty()) {
        std::cerr << "--sweep has no values\n";
        return kConfigError;
    }

    std::string root = opt.output;
    if (root.empty()) {
        try {
            root = fiberq::parse_config(text, base).output.dir;
        } catch (const fiberq::ConfigError& e) {
            std::cerr << e.what() << "\n";
            return kConfigError;
        }
    }

    std::vector<int> codes(values.size(), kOk);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < values.size();) {
            auto ov = base;
            ov.emplace_back(key, values[k]);
            std::erase_if(ov, [](const auto& kv) { return kv.first == "output.dir"; });
            ov.emplace_back("output.dir", root + "/sweep_" + std::to_string(k));
            codes[k] = run_one(text, ov, "[" + key + "=" + values[k] + "] ");
        }
    };
    unsigned jobs = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(values.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return *std::max_element(codes.begin(), codes.end());
}

int run_validate() {
    int failed = 0;
    for (const auto& r : fiberq::run_invariant_suite()) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        failed += r.passed ? 0 : 1;
    }
    std::cout << (failed ? "validate: " + std::to_string(failed) + " check(s) failed" : "validate: all checks passed")
              << "\n";
    return failed ? kInvariantAbort : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum master-equation simulator for light in nonlinear fiber"};
    app.require_subcommand(1);

    RunOptions opt;
    const std::vector<std::pair<std::string, std::string>> models{
        {"run-bs", "bs"}, {"run-spfwm", "spfwm"}, {"run-multimode", "multimode"},
        {"run-semiclassical", "semiclassical"}};
    std::vector<std::pair<CLI::App*, std::string>> subs;
    for (const auto& [name, model] : models) {
        auto* sub = app.add_subcommand(name, "Run a " + model + " scenario");
        sub->add_option("--config", opt.config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--output", opt.output, "Output directory (overrides output.dir)");
        sub->add_option("--step", opt.step, "Integrator step in km (overrides integrator.step_km)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--nmax", opt.nmax, "Photon-number truncation per quantum mode")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--samples", opt.samples, "Number of sample points (overrides output.samples)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--sweep", opt.sweep, "key=v1,v2,... run each value in its own output directory");
        sub->add_option("--jobs", opt.jobs, "Parallel workers for --sweep (default: hardware threads)");
        subs.emplace_back(sub, model);
    }
    auto* validate = app.add_subcommand("validate", "Run the built-in invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (validate->parsed()) return run_validate();
    for (const auto& [sub, model] : subs)
        if (sub->parsed()) return run_model(model, opt);
    return kConfigError;
}
