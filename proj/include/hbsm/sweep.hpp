#pragma once

// Declarative parameter sweeps over the detector and protocol models, with
// deterministic CSV output.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbsm/protocols.hpp"

namespace hbsm {

enum class Task { kDiagonal, kPurity, kHerald, kTeleport, kSwap };
enum class DetectorKind { kHbsm, kPnr, kOnOff };
enum class Spacing { kLinear, kLog };

std::string to_string(Task task);
std::string to_string(DetectorKind kind);

/// One complete parameter point. N_det empty means infinite multiplexing.
struct ParamSet {
  DetectorKind detector = DetectorKind::kHbsm;
  double R = 0.1;
  double delta = 0.1;
  double eta_spd = 0.5;
  double eta_hd = 0.9;
  std::optional<int> N_det;
  double c = 0.5;
  int n_max = 4;
  int n_cut = 2;
  InputKind input_kind = InputKind::kPure;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

/// Names accepted in `fixed`, series overrides and sweep axes.
const std::vector<std::string>& numeric_param_names();

/// Sets a numeric parameter by name (N_det accepts +inf).
void set_param(ParamSet& params, const std::string& name, double value);
double get_param(const ParamSet& params, const std::string& name);

struct SweepAxis {
  std::string param;
  /// Either an explicit list of values ...
  std::vector<double> values;
  /// ... or a range (used when `values` is empty).
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  Spacing spacing = Spacing::kLinear;

  std::vector<double> points() const;
  friend bool operator==(const SweepAxis&, const SweepAxis&) = default;
};

/// A named curve: overrides applied on top of the fixed parameters.
struct Series {
  std::string label;
  nlohmann::ordered_json overrides = nlohmann::ordered_json::object();
  friend bool operator==(const Series&, const Series&) = default;
};

struct SweepSpec {
  Task task = Task::kPurity;
  nlohmann::ordered_json fixed = nlohmann::ordered_json::object();
  std::vector<Series> series;
  std::vector<SweepAxis> sweep;
  std::string output;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// Parses and validates a config document; throws ConfigError with a
/// readable message on any schema or domain violation.
SweepSpec parse_sweep_spec(const nlohmann::ordered_json& doc);
SweepSpec load_sweep_spec(const std::string& path);
nlohmann::ordered_json to_json(const SweepSpec& spec);

/// Fixed parameters merged with defaults, before series/axes apply.
ParamSet fixed_params(const SweepSpec& spec);

struct GridPoint {
  std::string series;
  ParamSet params;
};

/// All grid points, series-major, then axis indices in lexicographic order.
std::vector<GridPoint> expand_grid(const SweepSpec& spec);

struct ResultRow {
  std::string series;
  ParamSet params;
  std::optional<double> fidelity;
  std::optional<double> baseline_fidelity;
  std::optional<double> success_prob;
  std::optional<double> single_photon_prob;
  std::optional<double> two_photon_prob;
  std::optional<double> purity;
  std::optional<double> p_max;
  /// Diagonal entries n = 0..4 (diagonal and purity tasks).
  std::vector<double> diagonal;
  std::optional<double> trace_0_4;
};

/// Builds the detector described by a parameter point.
PovmDiagonal build_detector(const ParamSet& params);

/// Evaluates one grid point.
ResultRow evaluate_point(Task task, const GridPoint& point);

/// Evaluates every grid point using `workers` threads (0 picks the value of
/// HBSM_LAB_WORKERS or the hardware concurrency). Output order never
/// depends on the worker count. Throws NumericalError naming the failing
/// point.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned workers = 0);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::string to_csv(const std::vector<ResultRow>& rows);
const std::vector<std::string>& csv_header();

/// Writes the CSV of `spec` to `path` (spec.output when empty).
void run_sweep_to_file(const SweepSpec& spec, const std::string& path = {}, unsigned workers = 0);

/// Worker count from HBSM_LAB_WORKERS, else hardware concurrency.
unsigned default_worker_count();

// --- presets ----------------------------------------------------------------

/// Known preset names (single panels and figure groups).
std::vector<std::string> preset_names();

/// Sweep specs reproducing a figure; group names such as "fig3" expand to
/// every panel. Throws ConfigError listing the presets for unknown names.
std::vector<SweepSpec> figure_preset(const std::string& name);

// --- crossover --------------------------------------------------------------

CrossoverMetric parse_crossover_metric(const std::string& name);

/// Runs the crossover search for the hybrid detector described by the fixed
/// parameters of `spec` against the PNR detector with N_det detectors.
CrossoverResult run_crossover(CrossoverMetric metric, const SweepSpec& spec);

}  // namespace hbsm
