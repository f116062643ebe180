#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hbsm/hybrid.hpp"
#include "hbsm/protocols.hpp"
#include "hbsm/sweep.hpp"

namespace py = pybind11;
using namespace hbsm;

namespace {

HbsmParams make_params(double R, double delta, double eta_spd, double eta_hd) {
  return HbsmParams{Reflectivity(R), Window(delta), Efficiency(eta_spd), Efficiency(eta_hd)};
}

Multiplexing make_multiplexing(std::optional<int> n) { return n ? Multiplexing(*n) : Multiplexing::infinite(); }

py::dict outcome_dict(const ProtocolOutcome& o) {
  py::dict d;
  d["fidelity"] = o.fidelity ? py::cast(*o.fidelity) : py::none();
  d["success_prob"] = o.success_prob;
  d["single_photon_prob"] = o.single_photon_prob;
  d["two_photon_prob"] = o.two_photon_prob;
  return d;
}

InputKind input_kind(const std::string& s) {
  if (s == "pure") return InputKind::kPure;
  if (s == "mixed") return InputKind::kMixed;
  throw DomainError("input kind must be 'pure' or 'mixed'");
}

SwapPort swap_port(const std::string& s) {
  if (s == "plus") return SwapPort::kPlus;
  if (s == "minus") return SwapPort::kMinus;
  throw DomainError("port must be 'plus' or 'minus'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid Bell-state measurement simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("spd_on_off", [](double eta, std::size_t length) { return spd_on_off(Efficiency(eta), length).entries(); },
        py::arg("eta"), py::arg("length") = kDefaultPovmLength);
  m.def("hd_windowed",
        [](double delta, double eta_hd, std::size_t length) {
          return hd_windowed(Window(delta), Efficiency(eta_hd), length).entries();
        },
        py::arg("delta"), py::arg("eta_hd"), py::arg("length") = kDefaultPovmLength);
  m.def("bernoulli_loss",
        [](std::vector<double> entries, double eta) {
          return bernoulli_loss(PovmDiagonal(std::move(entries)), Efficiency(eta)).entries();
        },
        py::arg("entries"), py::arg("eta"));
  m.def("pnr_single_click",
        [](double eta, std::optional<int> n, std::size_t length) {
          return pnr_single_click(Efficiency(eta), make_multiplexing(n), length).entries();
        },
        py::arg("eta"), py::arg("detectors") = py::none(), py::arg("length") = kDefaultPovmLength,
        "Single-click element of N multiplexed detectors (None means infinitely many).");

  m.def("assemble_hbsm",
        [](double R, double delta, double eta_spd, double eta_hd, std::size_t length) {
          return assemble_hbsm(make_params(R, delta, eta_spd, eta_hd), length).entries();
        },
        py::arg("R"), py::arg("delta"), py::arg("eta_spd"), py::arg("eta_hd"),
        py::arg("length") = kDefaultPovmLength);
  m.def("assemble_hbsm_by_conjugation",
        [](double R, double delta, double eta_spd, double eta_hd, std::size_t length) {
          return assemble_hbsm_by_conjugation(make_params(R, delta, eta_spd, eta_hd), length).entries();
        },
        py::arg("R"), py::arg("delta"), py::arg("eta_spd"), py::arg("eta_hd"),
        py::arg("length") = kDefaultPovmLength);
  m.def("closed_form_diag",
        [](double R, double delta, double eta_spd, double eta_hd, int n) {
          return closed_form_diag(make_params(R, delta, eta_spd, eta_hd), n);
        },
        py::arg("R"), py::arg("delta"), py::arg("eta_spd"), py::arg("eta_hd"), py::arg("n"));
  m.def("asymptotic_purity", [](double eta_hd) { return asymptotic_purity(Efficiency(eta_hd)); },
        py::arg("eta_hd"));
  m.def("purity", [](std::vector<double> entries, int n_cut) { return purity(PovmDiagonal(std::move(entries)), n_cut); },
        py::arg("entries"), py::arg("n_cut") = 2, "Returns None when both elements vanish.");
  m.def("p_max", [](std::vector<double> entries, int n_cut) { return p_max(PovmDiagonal(std::move(entries)), n_cut); },
        py::arg("entries"), py::arg("n_cut") = 2);

  m.def("herald",
        [](double c11, std::vector<double> detector, const std::string& kind, int n_max) {
          return outcome_dict(herald(c11, PovmDiagonal(std::move(detector)), input_kind(kind), Truncation(n_max)));
        },
        py::arg("c11"), py::arg("detector"), py::arg("input_kind") = "pure", py::arg("n_max") = 4);
  m.def("herald_baseline", [](double c11, int n_max) { return herald_baseline(c11, Truncation(n_max)); },
        py::arg("c11"), py::arg("n_max") = 4);
  m.def("teleport",
        [](double c1, std::vector<double> detector, int n_max) {
          return outcome_dict(teleport(c1, PovmDiagonal(std::move(detector)), Truncation(n_max)));
        },
        py::arg("c1"), py::arg("detector"), py::arg("n_max") = 4);
  m.def("swap",
        [](double c01, std::vector<double> detector, int n_max, const std::string& port) {
          return outcome_dict(swap(c01, PovmDiagonal(std::move(detector)), Truncation(n_max), swap_port(port)));
        },
        py::arg("c01"), py::arg("detector"), py::arg("n_max") = 4, py::arg("port") = "plus");

  m.def("find_crossover",
        [](const std::string& metric, double R, double delta, double eta_hd, std::optional<int> n_det, double c) {
          CompareSettings settings;
          settings.weight = c;
          const HbsmDetector hybrid{Reflectivity(R), Window(delta), Efficiency(eta_hd)};
          const auto r = find_crossover(parse_crossover_metric(metric), hybrid, make_multiplexing(n_det), settings);
          return r.efficiency;
        },
        py::arg("metric"), py::arg("R") = 0.1, py::arg("delta") = 0.1, py::arg("eta_hd") = 0.9,
        py::arg("N_det") = py::none(), py::arg("c") = 0.5,
        "Efficiency at which the PNR detector overtakes the hybrid one, or None.");

  m.def("run_sweep_csv",
        [](const std::string& config_json, unsigned workers) {
          nlohmann::ordered_json doc;
          try {
            doc = nlohmann::ordered_json::parse(config_json);
          } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
          }
          const auto spec = parse_sweep_spec(doc);
          py::gil_scoped_release release;
          return to_csv(run_sweep(spec, workers));
        },
        py::arg("config_json"), py::arg("workers") = 0u, "Runs a sweep described by a JSON string; returns CSV text.");
  m.def("preset_names", &preset_names);
  m.def("preset_config",
        [](const std::string& name) {
          std::vector<std::string> out;
          for (const auto& spec : figure_preset(name)) out.push_back(to_json(spec).dump());
          return out;
        },
        py::arg("name"), "JSON configs of every panel of a preset.");
}
