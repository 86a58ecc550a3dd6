#include "fiberq/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "fiberq/errors.hpp"
#include "fiberq/semiclassical.hpp"

namespace fiberq {

namespace {

std::string num(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

LindbladSystem build_quantum(const ScenarioConfig& c, RunSummary& s) {
    LindbladSystem sys;
    switch (c.model) {
        case ModelKind::bs:
            sys = build_bragg(c.bs);
            s.quantum_modes = {0, 1};
            break;
        case ModelKind::spfwm:
            sys = build_spfwm(c.spfwm);
            s.quantum_modes = {0, 1};
            break;
        case ModelKind::multimode: {
            auto mm = build_multimode(c.multimode);
            sys = std::move(mm.system);
            s.quantum_modes = std::move(mm.quantum_modes);
            s.notes = std::move(mm.notes);
            if (mm.discarded_constant != 0.0)
                s.notes.push_back("identity part of H dropped: " + num(mm.discarded_constant) + " km^-1");
            break;
        }
        case ModelKind::semiclassical:
            throw ParameterError("build_quantum: semiclassical model has no quantum generator");
    }
    if (c.frame == Frame::rotating) {
        const auto k = mode_wavenumbers(sys);
        sys = rotating_frame(sys, k);
    }
    return sys;
}

DensityMatrix initial_state(const ScenarioConfig& c, const CompositeSpace& space) {
    switch (c.initial.kind) {
        case InitialKind::vacuum: return DensityMatrix::vacuum(space);
        case InitialKind::fock: return DensityMatrix::fock(space, c.initial.fock);
        case InitialKind::coherent: return DensityMatrix::coherent(space, c.initial.coherent);
    }
    return DensityMatrix::vacuum(space);
}

std::string quantum_csv(const Trajectory& t, const std::vector<std::size_t>& grid_index) {
    std::ostringstream os;
    const bool two_mode = grid_index.size() == 2;
    os << "z_km";
    if (two_mode) {
        const auto& j = *t.records.front().joint;
        for (std::size_t a = 0; a < j.rows; ++a)
            for (std::size_t b = 0; b < j.cols; ++b) os << ",P_" << a << "_" << b;
        os << ",n_s_mean,n_i_mean,re_b_s,im_b_s,re_b_i,im_b_i";
    } else {
        for (auto g : grid_index) os << ",n_" << g << "_mean";
        for (auto g : grid_index) os << ",re_b_" << g << ",im_b_" << g;
    }
    os << ",trace_err,min_eig\n";

    for (std::size_t r = 0; r < t.records.size(); ++r) {
        const auto& rec = t.records[r];
        os << num(t.z_km[r]);
        if (two_mode)
            for (double p : rec.joint->probs) os << "," << num(p);
        for (double n : rec.mean_n) os << "," << num(n);
        for (const auto& b : rec.mean_b) os << "," << num(b.real()) << "," << num(b.imag());
        os << "," << num(rec.invariants.trace_err) << "," << num(rec.invariants.min_eig) << "\n";
    }
    return os.str();
}

double field_power(cplx a, double delta_w) {
    return std::norm(a) * delta_w * delta_w / (2.0 * std::numbers::pi);
}

ScenarioResult run_semiclassical(const ScenarioConfig& c) {
    ScenarioResult out;
    auto& s = out.summary;
    const auto& g = c.multimode;
    SpectralField f0;
    for (std::size_t k = 0; k < g.mode_count(); ++k) {
        const double amp = pump_amplitude(c.semiclassical.initial_power[k], g.delta_w);
        f0.amplitudes.push_back(std::polar(amp, c.semiclassical.initial_phase[k]));
    }
    MeanFieldConfig mf;
    mf.step_km = c.integrator.step_km;
    mf.include_self_steepening = c.semiclassical.self_steepening;
    mf.include_sprs_loss = c.semiclassical.sprs_loss;
    const auto z = uniform_samples(g.length_km, c.output.samples);
    const auto traj = integrate_mean_field(g, f0, g.length_km, mf, z);

    std::ostringstream os;
    os << "z_km";
    for (std::size_t k = 0; k < g.mode_count(); ++k) os << ",power_" << k << ",re_A_" << k << ",im_A_" << k;
    os << ",total_power\n";
    for (std::size_t r = 0; r < traj.z_km.size(); ++r) {
        os << num(traj.z_km[r]);
        double total = 0.0;
        for (const auto& a : traj.fields[r].amplitudes) {
            const double p = field_power(a, g.delta_w);
            total += p;
            os << "," << num(p) << "," << num(a.real()) << "," << num(a.imag());
        }
        os << "," << num(total) << "\n";
    }
    out.csv = os.str();
    s.rows = traj.z_km.size();
    for (const auto& a : traj.fields.back().amplitudes) {
        s.final_power_w.push_back(field_power(a, g.delta_w));
        s.final_mean_b.push_back(a);
    }
    for (std::size_t k = 0; k < g.mode_count(); ++k) s.quantum_modes.push_back(k);
    return out;
}

}  // namespace

ScenarioResult execute_scenario(const ScenarioConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    ScenarioResult out;
    if (c.model == ModelKind::semiclassical) {
        out = run_semiclassical(c);
    } else {
        auto& s = out.summary;
        const auto sys = build_quantum(c, s);
        const auto rho0 = initial_state(c, sys.space);
        const auto traj = propagate(sys, rho0, c.length_km(), c.integrator, c.output.samples);
        out.csv = quantum_csv(traj, s.quantum_modes);
        s.rows = traj.records.size();
        s.worst = traj.worst;
        const auto& last = traj.records.back();
        s.final_mean_n = last.mean_n;
        s.final_mean_b = last.mean_b;
        if (last.joint) {
            s.final_joint = last.joint;
            s.heralding = heralding_metrics(*last.joint);
        }
    }
    out.summary.config = c;
    out.summary.length_km = c.length_km();
    out.summary.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

RunSummary run_scenario(const ScenarioConfig& c) {
    auto result = execute_scenario(c);
    namespace fs = std::filesystem;
    const fs::path dir(c.output.dir);
    fs::create_directories(dir);
    const auto csv_path = dir / "trajectory.csv";
    const auto json_path = dir / "summary.json";
    result.summary.csv_path = csv_path.string();
    result.summary.summary_path = json_path.string();
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + csv_path.string());
        f << result.csv;
    }
    {
        std::ofstream f(json_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + json_path.string());
        f << summary_json(result.summary) << "\n";
    }
    return result.summary;
}

std::string summary_json(const RunSummary& s) {
    using nlohmann::json;
    json j;
    j["model"] = to_string(s.config.model);
    j["length_km"] = s.length_km;
    j["rows"] = s.rows;
    j["wall_time_s"] = s.wall_time_s;

    json cfg = json::object();
    std::istringstream lines(render_config(s.config));
    for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) cfg[line.substr(0, eq)] = line.substr(eq + 3);
    }
    j["config"] = cfg;

    json fin;
    fin["grid_modes"] = s.quantum_modes;
    if (s.config.model == ModelKind::semiclassical) {
        fin["power_w"] = s.final_power_w;
        json amps = json::array();
        for (const auto& a : s.final_mean_b) amps.push_back({a.real(), a.imag()});
        fin["amplitude"] = amps;
    } else {
        j["invariants"] = {{"max_trace_err", s.worst.trace_err},
                           {"max_herm_err", s.worst.herm_err},
                           {"min_eig", s.worst.min_eig}};
        fin["mean_n"] = s.final_mean_n;
        json b = json::array();
        for (const auto& x : s.final_mean_b) b.push_back({x.real(), x.imag()});
        fin["mean_b"] = b;
        if (s.final_joint)
            fin["joint"] = {{"rows", s.final_joint->rows},
                            {"cols", s.final_joint->cols},
                            {"probs", s.final_joint->probs}};
        if (s.heralding)
            fin["heralding"] = {{"p_coincidence", s.heralding->p_coincidence},
                                {"p_mismatch", s.heralding->p_mismatch},
                                {"p_false_herald", s.heralding->p_false_herald}};
    }
    j["final"] = fin;
    j["notes"] = s.notes;
    j["files"] = {{"csv", s.csv_path}, {"summary", s.summary_path}};
    return j.dump(2);
}

}  // namespace fiberq
