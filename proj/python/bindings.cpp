#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hpdob/config.hpp"
#include "hpdob/io.hpp"
#include "hpdob/observers.hpp"
#include "hpdob/plant.hpp"
#include "hpdob/sim.hpp"
#include "hpdob/validate.hpp"

namespace py = pybind11;
using namespace hpdob;

namespace {

CoeffMode coeff_mode_from(const std::string& name) {
  if (name == "derived") return CoeffMode::Derived;
  if (name == "paper-literal") return CoeffMode::PaperLiteral;
  throw py::value_error("coeff_mode must be 'derived' or 'paper-literal'");
}

py::dict trace_columns_of(const Trace& tr) {
  const std::size_t n = tr.records.size();
  std::vector<py::array_t<double>> cols;
  std::vector<double*> ptrs;
  for (std::size_t c = 0; c < trace_columns().size(); ++c) {
    cols.emplace_back(static_cast<py::ssize_t>(n));
    ptrs.push_back(cols.back().mutable_data());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const TraceRecord& r = tr.records[i];
    const double row[] = {r.t, r.q, r.qdot, r.q_ref, r.qdot_ref, r.u, r.tau_d, r.tau_dn, r.tau_hat, r.est_error};
    for (std::size_t c = 0; c < cols.size(); ++c) ptrs[c][i] = row[c];
  }
  py::dict out;
  for (std::size_t c = 0; c < cols.size(); ++c) out[py::str(trace_columns()[c])] = cols[c];
  return out;
}

py::dict metrics_dict(const Metrics& m) {
  return py::module_::import("json").attr("loads")(metrics_to_json(m).dump());
}

py::dict run_result(const Trace& tr, const Metrics& m) {
  py::dict out;
  out["trace"] = trace_columns_of(tr);
  out["metrics"] = metrics_dict(m);
  out["Ts"] = tr.Ts;
  out["diverged"] = tr.diverged;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete-time disturbance observers for a second-order servo";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ServoParams>(m, "ServoParams")
      .def(py::init<>())
      .def(py::init([](double inertia, double viscous, int damping_sign) {
             ServoParams p{inertia, viscous, damping_sign};
             p.validate();
             return p;
           }),
           py::arg("inertia"), py::arg("viscous"), py::arg("damping_sign") = -1)
      .def_readwrite("inertia", &ServoParams::inertia)
      .def_readwrite("viscous", &ServoParams::viscous)
      .def_readwrite("damping_sign", &ServoParams::damping_sign);

  py::class_<DiscreteModel>(m, "DiscreteModel")
      .def_readonly("A", &DiscreteModel::A)
      .def_readonly("B", &DiscreteModel::B)
      .def_readonly("D", &DiscreteModel::D)
      .def_readonly("Ts", &DiscreteModel::Ts);

  py::class_<ObserverGain>(m, "ObserverGain")
      .def_readonly("L", &ObserverGain::L)
      .def_readonly("g", &ObserverGain::g);

  m.def("discretize", [](const ServoParams& p, double Ts) { return discretize(build_continuous(p), Ts); },
        py::arg("params"), py::arg("Ts"), "Exact zero-order-hold model of the servo.");
  m.def("continuous_A", [](const ServoParams& p) { return build_continuous(p).A; }, py::arg("params"));
  m.def("matrix_exp_oracle", &matrix_exp_oracle, py::arg("A"), py::arg("t"), py::arg("tol") = 1e-18);
  m.def("tune_gain", &tune_gain, py::arg("g"), py::arg("D"));
  m.def("contraction_factor", &contraction_factor, py::arg("gain"), py::arg("D"));
  m.def(
      "delta_estimate",
      [](const std::vector<double>& newest_first, int order, const std::string& coeff_mode) {
        if (newest_first.size() > 3) throw py::value_error("history holds at most 3 values");
        PredictorHistory h;
        for (auto it = newest_first.rbegin(); it != newest_first.rend(); ++it) h.push(*it);
        return delta_estimate(h, order, coeff_mode_from(coeff_mode));
      },
      py::arg("history"), py::arg("order"), py::arg("coeff_mode") = "derived",
      "Predicted disturbance change from predictor outputs, newest first.");

  m.def(
      "resolve_config", [](const std::string& text) { return config_to_json(parse_config(text)).dump(); },
      py::arg("config_json"), "Fully resolved configuration as JSON text.");
  m.def(
      "run",
      [](const std::string& text) {
        const ConfigFile cfg = parse_config(text);
        Trace tr;
        {
          py::gil_scoped_release release;
          tr = run_scenario(cfg.scenario);
        }
        return run_result(tr, compute_metrics(tr, cfg.scenario.settle_fraction));
      },
      py::arg("config_json"));
  m.def(
      "sweep",
      [](const std::string& text, const std::string& parameter, const std::vector<double>& values) {
        const ConfigFile cfg = parse_config(text);
        std::vector<SweepResult> res;
        {
          py::gil_scoped_release release;
          res = sweep(cfg.scenario, parameter, values);
        }
        py::list out;
        for (const auto& r : res) {
          py::dict d = run_result(r.trace, r.metrics);
          d["value"] = r.value;
          out.append(d);
        }
        return out;
      },
      py::arg("config_json"), py::arg("parameter"), py::arg("values"));
  m.def("sweep_parameters", &sweep_parameters);
  m.def(
      "validate",
      [](double perturb_ad) {
        ValidationOptions opts;
        opts.perturb_ad = perturb_ad;
        py::list out;
        for (const auto& c : run_validation(opts)) {
          py::dict d;
          d["name"] = c.name;
          d["passed"] = c.passed;
          d["informational"] = c.informational;
          d["residual"] = c.residual;
          d["tolerance"] = c.tolerance;
          d["detail"] = c.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("perturb_ad") = 0.0);
}
