#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fiberq/config.hpp"
#include "fiberq/errors.hpp"
#include "fiberq/lindblad.hpp"
#include "fiberq/models.hpp"
#include "fiberq/observables.hpp"
#include "fiberq/scenario.hpp"
#include "fiberq/semiclassical.hpp"
#include "fiberq/validation.hpp"

namespace py = pybind11;
using namespace fiberq;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CArray to_numpy(const CMatrix& m) {
    CArray out({m.rows(), m.cols()});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

CMatrix from_numpy(const CArray& a) {
    if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
    const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
    return CMatrix(r, c, std::vector<cplx>(a.data(), a.data() + r * c));
}

std::vector<std::size_t> mode_dims(const CompositeSpace& s) {
    std::vector<std::size_t> d;
    for (const auto& m : s.modes()) d.push_back(m.dim());
    return d;
}

py::dict trajectory_dict(const Trajectory& t) {
    py::dict d;
    d["z_km"] = t.z_km;
    std::vector<std::vector<double>> n;
    std::vector<std::vector<cplx>> b;
    std::vector<double> trace_err, herm_err, min_eig;
    py::list joint;
    for (const auto& r : t.records) {
        n.push_back(r.mean_n);
        b.push_back(r.mean_b);
        trace_err.push_back(r.invariants.trace_err);
        herm_err.push_back(r.invariants.herm_err);
        min_eig.push_back(r.invariants.min_eig);
        if (r.joint) {
            py::array_t<double> p({r.joint->rows, r.joint->cols});
            std::copy(r.joint->probs.begin(), r.joint->probs.end(), p.mutable_data());
            joint.append(p);
        }
    }
    d["mean_n"] = n;
    d["mean_b"] = b;
    d["trace_err"] = trace_err;
    d["herm_err"] = herm_err;
    d["min_eig"] = min_eig;
    d["joint"] = joint;
    d["final_state"] = to_numpy(t.final_state.matrix());
    return d;
}

DensityMatrix state_for(const LindbladSystem& s, const CArray& rho) {
    return DensityMatrix::checked(s.space, from_numpy(rho));
}

}  // namespace

PYBIND11_MODULE(_fiberq, m) {
    m.doc() = "Lindblad propagation of quantum light in nonlinear fibers";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    static py::exception<InvariantBreach> breach(m, "InvariantBreach", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvariantBreach& e) {
            // args: (message, z_km)
            PyErr_SetObject(breach.ptr(), py::make_tuple(e.what(), e.z_km()).ptr());
        }
    });

    py::class_<SpFWMParams>(m, "SpFWMParams")
        .def(py::init<>())
        .def_readwrite("gamma", &SpFWMParams::gamma)
        .def_readwrite("power", &SpFWMParams::power)
        .def_readwrite("alpha_s", &SpFWMParams::alpha_s)
        .def_readwrite("alpha_i", &SpFWMParams::alpha_i)
        .def_readwrite("rr_omega", &SpFWMParams::rr_omega)
        .def_readwrite("ri_omega", &SpFWMParams::ri_omega)
        .def_readwrite("beta_p", &SpFWMParams::beta_p)
        .def_readwrite("beta_s", &SpFWMParams::beta_s)
        .def_readwrite("beta_i", &SpFWMParams::beta_i)
        .def_readwrite("length_km", &SpFWMParams::length_km)
        .def_readwrite("n_max", &SpFWMParams::n_max);

    py::class_<BSParams>(m, "BSParams")
        .def(py::init<>())
        .def_readwrite("gamma", &BSParams::gamma)
        .def_readwrite("power", &BSParams::power)
        .def_readwrite("alpha_s", &BSParams::alpha_s)
        .def_readwrite("alpha_i", &BSParams::alpha_i)
        .def_readwrite("rr_sep", &BSParams::rr_sep)
        .def_readwrite("rr_shift", &BSParams::rr_shift)
        .def_readwrite("rr_shift_minus_sep", &BSParams::rr_shift_minus_sep)
        .def_readwrite("rr_shift_plus_sep", &BSParams::rr_shift_plus_sep)
        .def_readwrite("ri_shift", &BSParams::ri_shift)
        .def_readwrite("ri_shift_minus_sep", &BSParams::ri_shift_minus_sep)
        .def_readwrite("ri_shift_plus_sep", &BSParams::ri_shift_plus_sep)
        .def_readwrite("beta_s", &BSParams::beta_s)
        .def_readwrite("beta_i", &BSParams::beta_i)
        .def_readwrite("beta_p1", &BSParams::beta_p1)
        .def_readwrite("beta_p2", &BSParams::beta_p2)
        .def_readwrite("length_km", &BSParams::length_km)
        .def_readwrite("n_max", &BSParams::n_max);

    py::class_<PumpSubstitution>(m, "PumpSubstitution")
        .def(py::init<>())
        .def(py::init([](double amplitude, double k_p) { return PumpSubstitution{amplitude, k_p}; }),
             py::arg("amplitude"), py::arg("k_p") = 0.0)
        .def_readwrite("amplitude", &PumpSubstitution::amplitude)
        .def_readwrite("k_p", &PumpSubstitution::k_p);

    py::class_<MultimodeParams>(m, "MultimodeParams")
        .def(py::init<>())
        .def_readwrite("mode_freqs", &MultimodeParams::mode_freqs)
        .def_readwrite("delta_w", &MultimodeParams::delta_w)
        .def_readwrite("omega0", &MultimodeParams::omega0)
        .def_readwrite("hbar", &MultimodeParams::hbar)
        .def_readwrite("beta", &MultimodeParams::beta)
        .def_readwrite("alpha", &MultimodeParams::alpha)
        .def_readwrite("raman_rr", &MultimodeParams::raman_rr)
        .def_readwrite("raman_ri", &MultimodeParams::raman_ri)
        .def_readwrite("gamma", &MultimodeParams::gamma)
        .def_readwrite("n_max", &MultimodeParams::n_max)
        .def_readwrite("pumps", &MultimodeParams::pumps)
        .def_readwrite("z_eval", &MultimodeParams::z_eval)
        .def_readwrite("exact_photon_energy", &MultimodeParams::exact_photon_energy)
        .def_readwrite("dim_cap", &MultimodeParams::dim_cap)
        .def_readwrite("length_km", &MultimodeParams::length_km);

    py::class_<LindbladSystem>(m, "LindbladSystem")
        .def_property_readonly("mode_dims", [](const LindbladSystem& s) { return mode_dims(s.space); })
        .def_property_readonly("dim", [](const LindbladSystem& s) { return s.space.total_dim(); })
        .def_property_readonly("hamiltonian", [](const LindbladSystem& s) { return to_numpy(s.hamiltonian.matrix()); })
        .def_property_readonly("jump_labels",
                               [](const LindbladSystem& s) {
                                   std::vector<std::string> v;
                                   for (const auto& j : s.jumps) v.push_back(j.label);
                                   return v;
                               })
        .def("jump", [](const LindbladSystem& s, const std::string& label) {
            for (const auto& j : s.jumps)
                if (j.label == label) return to_numpy(j.op.matrix());
            throw py::key_error(label);
        })
        .def("index", [](const LindbladSystem& s, const std::vector<std::size_t>& occ) { return s.space.index(occ); })
        .def("vacuum", [](const LindbladSystem& s) { return to_numpy(DensityMatrix::vacuum(s.space).matrix()); })
        .def("fock",
             [](const LindbladSystem& s, const std::vector<std::size_t>& occ) {
                 return to_numpy(DensityMatrix::fock(s.space, occ).matrix());
             })
        .def("coherent", [](const LindbladSystem& s, const std::vector<cplx>& amps) {
            return to_numpy(DensityMatrix::coherent(s.space, amps).matrix());
        });

    m.def("build_spfwm", &build_spfwm, py::arg("params"));
    m.def("build_bragg", &build_bragg, py::arg("params"));
    m.def(
        "build_multimode",
        [](const MultimodeParams& p) {
            auto r = build_multimode(p);
            return py::make_tuple(std::move(r.system), r.quantum_modes, r.discarded_constant, r.notes);
        },
        py::arg("params"), "Returns (system, quantum_modes, discarded_constant, notes).");
    m.def("pump_amplitude", &pump_amplitude, py::arg("power_w"), py::arg("delta_w"));

    auto pm = [](const PhaseMatchReport& r) {
        py::dict d;
        for (const auto& w : r.k) d[py::str(w.wave)] = w.k;
        d["mismatch"] = r.mismatch;
        d["matched"] = r.matched;
        return d;
    };
    m.def("phase_match", [pm](const SpFWMParams& p) { return pm(phase_match(p)); });
    m.def("phase_match", [pm](const BSParams& p) { return pm(phase_match(p)); });
    m.def("mode_wavenumbers", &mode_wavenumbers, py::arg("system"));
    m.def(
        "rotating_frame",
        [](const LindbladSystem& s, std::vector<double> k, double z) { return rotating_frame(s, k, z); },
        py::arg("system"), py::arg("k_shifts"), py::arg("z_km") = 0.0);

    m.def(
        "lindblad_rhs", [](const LindbladSystem& s, const CArray& rho) { return to_numpy(lindblad_rhs(s, from_numpy(rho))); },
        py::arg("system"), py::arg("rho"));
    m.def(
        "propagate",
        [](const LindbladSystem& s, const CArray& rho0, double length_km, double step_km, std::size_t samples,
           bool rehermitize) {
            IntegratorConfig cfg;
            cfg.step_km = step_km;
            cfg.rehermitize = rehermitize;
            Trajectory t;
            {
                py::gil_scoped_release release;
                t = propagate(s, state_for(s, rho0), length_km, cfg, samples);
            }
            return trajectory_dict(t);
        },
        py::arg("system"), py::arg("rho0"), py::arg("length_km"), py::arg("step_km") = 1e-3,
        py::arg("samples") = 101, py::arg("rehermitize") = false);

    m.def(
        "heralding_metrics",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> p) {
            if (p.ndim() != 2) throw DimensionError("expected a 2-D table");
            JointNumberTable t{static_cast<std::size_t>(p.shape(0)), static_cast<std::size_t>(p.shape(1)),
                               std::vector<double>(p.data(), p.data() + p.size())};
            const auto h = heralding_metrics(t);
            py::dict d;
            d["p_coincidence"] = h.p_coincidence;
            d["p_mismatch"] = h.p_mismatch;
            d["p_false_herald"] = h.p_false_herald;
            return d;
        },
        py::arg("joint"));

    m.def(
        "integrate_mean_field",
        [](const MultimodeParams& g, const std::vector<cplx>& a0, double length_km, double step_km,
           bool self_steepening, bool sprs_loss, const std::vector<double>& samples) {
            MeanFieldConfig cfg{step_km, self_steepening, sprs_loss};
            const auto t = integrate_mean_field(g, SpectralField{a0}, length_km, cfg, samples);
            std::vector<std::vector<cplx>> f;
            for (const auto& x : t.fields) f.push_back(x.amplitudes);
            return py::make_tuple(t.z_km, f);
        },
        py::arg("grid"), py::arg("amplitudes"), py::arg("length_km"), py::arg("step_km") = 1e-3,
        py::arg("self_steepening") = true, py::arg("sprs_loss") = true, py::arg("samples") = std::vector<double>{});
    m.def("sprs_depletion_rate", &sprs_depletion_rate, py::arg("grid"));
    m.def("pump_depletion", &pump_depletion, py::arg("p0_w"), py::arg("z_km"), py::arg("grid"));

    auto reduced = [](auto params) {
        return [](const decltype(params)& p, cplx b_s, cplx b_i, const std::vector<double>& samples,
                  bool rotating, double step_km) {
            const auto t = reduced_mean_field(p, {b_s, b_i}, ReducedOptions{rotating, step_km}, samples);
            std::vector<cplx> s, i;
            for (const auto& x : t.moments) {
                s.push_back(x.b_s);
                i.push_back(x.b_i);
            }
            return py::make_tuple(t.z_km, s, i);
        };
    };
    m.def("reduced_mean_field", reduced(BSParams{}), py::arg("params"), py::arg("b_s"), py::arg("b_i"),
          py::arg("samples"), py::arg("rotating_frame") = false, py::arg("step_km") = 1e-3);
    m.def("reduced_mean_field", reduced(SpFWMParams{}), py::arg("params"), py::arg("b_s"), py::arg("b_i"),
          py::arg("samples"), py::arg("rotating_frame") = false, py::arg("step_km") = 1e-3);

    m.def(
        "normalize_config", [](const std::string& text) { return render_config(parse_config(text)); },
        py::arg("text"), "Parses, validates and renders a scenario config.");
    m.def(
        "execute_scenario",
        [](const std::string& text, const std::vector<std::pair<std::string, std::string>>& overrides) {
            const auto cfg = parse_config(text, overrides);
            ScenarioResult r;
            {
                py::gil_scoped_release release;
                r = execute_scenario(cfg);
            }
            return py::make_tuple(r.csv, summary_json(r.summary));
        },
        py::arg("text"), py::arg("overrides") = std::vector<std::pair<std::string, std::string>>{},
        "Runs a scenario in memory; returns (csv_text, summary_json_text).");
    m.def(
        "run_invariant_suite",
        []() {
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const auto& c : run_invariant_suite()) out.emplace_back(c.name, c.passed, c.detail);
            return out;
        });
}
