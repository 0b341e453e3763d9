#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrdiode/runner.hpp"

namespace py = pybind11;
using namespace qrdiode;

namespace {

py::dict steady_dict(const SteadySolution& sol) {
    const auto hc = observables::heat_current_rate_form(sol.state, sol.channels);
    py::dict d;
    d["energies"] = sol.basis->energies;
    d["populations"] = sol.state.populations;
    d["residual"] = sol.state.residual;
    d["q_L"] = hc.q_L;
    d["q_R"] = hc.q_R;
    d["conservation_residual"] = hc.conservation_residual;
    d["photon_rate"] = observables::photon_detection_rate(sol.state, sol.channels, Bath::L);
    return d;
}

}  // namespace

PYBIND11_MODULE(_qrdiode, m) {
    m.doc() = "Steady-state heat transport and photon detection in the dissipative two-photon Rabi model";
    m.attr("__version__") = runner::kVersion;

    static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
    static py::exception<Error> error(m, "QrdiodeError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            py::set_error(validation, (std::string(e.kind()) + ": " + e.what()).c_str());
        } catch (const Error& e) {
            py::set_error(error, (std::string(e.kind()) + ": " + e.what()).c_str());
        }
    });

    py::enum_<Bath>(m, "Bath").value("L", Bath::L).value("R", Bath::R);
    py::enum_<CouplingKind>(m, "CouplingKind")
        .value("IsingZZ", CouplingKind::IsingZZ)
        .value("AsymmetricZX", CouplingKind::AsymmetricZX)
        .value("DM", CouplingKind::DM);

    py::class_<RabiParams>(m, "RabiParams")
        .def(py::init([](double omega_L, double omega_R, double g, double theta, int n_fock) {
                 RabiParams p{omega_L, omega_R, g, theta, n_fock};
                 p.validate();
                 return p;
             }),
             py::arg("omega_L") = 1.0, py::arg("omega_R") = 0.1, py::arg("g") = 0.015, py::arg("theta") = 0.0,
             py::arg("n_fock") = 20)
        .def_readwrite("omega_L", &RabiParams::omega_L)
        .def_readwrite("omega_R", &RabiParams::omega_R)
        .def_readwrite("g", &RabiParams::g)
        .def_readwrite("theta", &RabiParams::theta)
        .def_readwrite("n_fock", &RabiParams::n_fock)
        .def("validate", &RabiParams::validate)
        .def_property_readonly("truncation_dependent", &RabiParams::truncation_dependent);

    py::class_<TwoQubitParams>(m, "TwoQubitParams")
        .def(py::init([](CouplingKind kind, double omega_L, double omega_R, double g) {
                 TwoQubitParams p{omega_L, omega_R, g, kind};
                 p.validate();
                 return p;
             }),
             py::arg("kind") = CouplingKind::IsingZZ, py::arg("omega_L") = 1.0, py::arg("omega_R") = 1.0,
             py::arg("g") = 0.1)
        .def_readwrite("kind", &TwoQubitParams::kind)
        .def_readwrite("omega_L", &TwoQubitParams::omega_L)
        .def_readwrite("omega_R", &TwoQubitParams::omega_R)
        .def_readwrite("g", &TwoQubitParams::g);

    py::class_<ObservableRecord>(m, "ObservableRecord")
        .def_readonly("T_L", &ObservableRecord::T_L)
        .def_readonly("T_R", &ObservableRecord::T_R)
        .def_readonly("q_L", &ObservableRecord::q_L)
        .def_readonly("q_R", &ObservableRecord::q_R)
        .def_readonly("q_f", &ObservableRecord::q_f)
        .def_readonly("q_r", &ObservableRecord::q_r)
        .def_readonly("rectification", &ObservableRecord::rectification)
        .def_readonly("photon_rate_f", &ObservableRecord::photon_rate_f)
        .def_readonly("photon_rate_r", &ObservableRecord::photon_rate_r)
        .def_readonly("photon_asymmetry", &ObservableRecord::photon_asymmetry)
        .def_readonly("gamma", &ObservableRecord::gamma)
        .def_readonly("n_fock", &ObservableRecord::n_fock)
        .def_readonly("residual", &ObservableRecord::residual)
        .def_readonly("truncation_dependent", &ObservableRecord::truncation_dependent);

    m.def(
        "hamiltonian", [](const ModelParams& p) { return models::build_model(p).hamiltonian; }, py::arg("params"),
        "Hamiltonian matrix in the product basis");
    m.def(
        "solve",
        [](const ModelParams& p, double t_left, double t_right, double gamma) {
            return steady_dict(steady::solve_model(models::build_model(p), {Bath::L, t_left, gamma},
                                                   {Bath::R, t_right, gamma}));
        },
        py::arg("params"), py::arg("T_L"), py::arg("T_R"), py::arg("gamma") = 1e-4,
        "Diagonal steady state, heat currents and left-bath photon rate for one bath pair");
    m.def(
        "evaluate_pair",
        [](const ModelParams& p, double t_left, double t_right, double gamma) {
            return observables::evaluate_pair(p, t_left, t_right, gamma);
        },
        py::arg("params"), py::arg("T_L"), py::arg("T_R"), py::arg("gamma") = 1e-4);
    m.def(
        "rectification_pair",
        [](const ModelParams& p, double t_hot, double t_cold, double gamma) {
            return observables::rectification_pair(p, t_hot, t_cold, gamma);
        },
        py::arg("params"), py::arg("T_hot"), py::arg("T_cold"), py::arg("gamma") = 1e-4);
    m.def("rectification", &observables::rectification, py::arg("q_f"), py::arg("q_r"));

    m.def(
        "run_point",
        [](const std::string& config_json) {
            return runner::run_point(runner::parse_config(config_json));
        },
        py::arg("config_json"), "Forward/reverse record for a JSON run configuration");
    m.def(
        "convergence",
        [](const std::string& config_json, const std::vector<int>& n_list) {
            const auto rep = runner::convergence_check(runner::parse_config(config_json), n_list);
            py::list rows;
            for (const auto& r : rep.rows)
                rows.append(py::dict(py::arg("n_fock") = r.n_fock, py::arg("q_L") = r.q_L,
                                     py::arg("relative_change") = r.relative_change,
                                     py::arg("converged") = r.converged));
            return py::make_tuple(rows, rep.converged_at);
        },
        py::arg("config_json"), py::arg("n_list"));
    m.def("figure_ids", &runner::figure_ids);
    m.def(
        "run_figure",
        [](const std::string& id, const std::string& out_dir, int threads) {
            runner::FigureResult res;
            {
                py::gil_scoped_release release;
                res = runner::run_figure(id, out_dir, threads > 0 ? threads : runner::worker_count());
            }
            return py::make_tuple(res.files, res.failed_points);
        },
        py::arg("id"), py::arg("out_dir"), py::arg("threads") = 0);
    m.def(
        "to_si", [](double value, const std::string& kind) { return units::to_si(value, kind); }, py::arg("value"),
        py::arg("kind"), "frequency -> rad/s, temperature -> K, power -> W");
}
