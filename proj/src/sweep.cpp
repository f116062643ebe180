#include "hbsm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace hbsm {

using nlohmann::ordered_json;

namespace {

constexpr int kDiagonalEntries = 5;

const std::vector<std::string> kTopLevelKeys = {"task", "fixed", "series", "sweep", "output"};

Task parse_task(const std::string& name) {
  if (name == "diagonal") return Task::kDiagonal;
  if (name == "purity") return Task::kPurity;
  if (name == "herald") return Task::kHerald;
  if (name == "teleport") return Task::kTeleport;
  if (name == "swap") return Task::kSwap;
  throw ConfigError("unknown task '" + name + "' (expected diagonal, purity, herald, teleport or swap)");
}

DetectorKind parse_detector(const std::string& name) {
  if (name == "hbsm") return DetectorKind::kHbsm;
  if (name == "pnr") return DetectorKind::kPnr;
  if (name == "onoff") return DetectorKind::kOnOff;
  throw ConfigError("unknown detector '" + name + "' (expected hbsm, pnr or onoff)");
}

InputKind parse_input_kind(const std::string& name) {
  if (name == "pure") return InputKind::kPure;
  if (name == "mixed") return InputKind::kMixed;
  throw ConfigError("unknown input_kind '" + name + "' (expected pure or mixed)");
}

double number_or_inf(const ordered_json& value, const std::string& key) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string() && value.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  throw ConfigError("parameter '" + key + "' must be a number or \"inf\"");
}

void apply_overrides(ParamSet& params, const ordered_json& obj, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (key == "detector") {
      if (!value.is_string()) throw ConfigError("detector must be a string");
      params.detector = parse_detector(value.get<std::string>());
    } else if (key == "input_kind") {
      if (!value.is_string()) throw ConfigError("input_kind must be a string");
      params.input_kind = parse_input_kind(value.get<std::string>());
    } else if (std::find(numeric_param_names().begin(), numeric_param_names().end(), key) !=
               numeric_param_names().end()) {
      set_param(params, key, number_or_inf(value, key));
    } else {
      throw ConfigError("unknown parameter '" + key + "' in " + where);
    }
  }
}

void validate_params(const ParamSet& p) {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string(name) + " = " + std::to_string(v) + " outside [0, 1]");
    }
  };
  unit(p.R, "R");
  unit(p.eta_spd, "eta_spd");
  unit(p.eta_hd, "eta_hd");
  unit(p.c, "c");
  if (!(p.delta > 0.0)) throw ConfigError("delta = " + std::to_string(p.delta) + " must be positive");
  if (p.N_det && *p.N_det < 1) throw ConfigError("N_det must be at least 1");
  if (p.n_max < 2 || p.n_max > Truncation::kMaxPhotons) {
    throw ConfigError("n_max must lie in [2, " + std::to_string(Truncation::kMaxPhotons) + "]");
  }
  if (p.n_cut < 1 || p.n_cut > std::max<int>(kDefaultPovmLength, p.n_max + 1) - 1) {
    throw ConfigError("n_cut = " + std::to_string(p.n_cut) + " exceeds the detector element length");
  }
}

int to_int(double value, const std::string& name) {
  if (!(std::abs(value - std::round(value)) < 1e-9)) throw ConfigError(name + " must be an integer");
  return static_cast<int>(std::lround(value));
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

ordered_json axis_to_json(const SweepAxis& axis) {
  ordered_json j;
  j["param"] = axis.param;
  if (!axis.values.empty()) {
    ordered_json values = ordered_json::array();
    for (double v : axis.values) {
      if (std::isinf(v)) values.push_back("inf");
      else values.push_back(v);
    }
    j["values"] = std::move(values);
  } else {
    j["start"] = axis.start;
    j["stop"] = axis.stop;
    j["count"] = axis.count;
    j["spacing"] = axis.spacing == Spacing::kLog ? "log" : "linear";
  }
  return j;
}

SweepAxis parse_axis(const ordered_json& j) {
  if (!j.is_object()) throw ConfigError("sweep axis must be an object");
  for (const auto& [key, _] : j.items()) {
    static const std::set<std::string> allowed = {"param", "values", "start", "stop", "count", "spacing"};
    if (!allowed.count(key)) throw ConfigError("unknown sweep axis key '" + key + "'");
  }
  SweepAxis axis;
  if (!j.contains("param") || !j["param"].is_string()) throw ConfigError("sweep axis needs a string 'param'");
  axis.param = j["param"].get<std::string>();
  const auto& names = numeric_param_names();
  if (std::find(names.begin(), names.end(), axis.param) == names.end()) {
    throw ConfigError("cannot sweep unknown parameter '" + axis.param + "'");
  }
  if (j.contains("values")) {
    if (j.contains("start") || j.contains("stop") || j.contains("count") || j.contains("spacing")) {
      throw ConfigError("sweep axis '" + axis.param + "' mixes 'values' with a range");
    }
    if (!j["values"].is_array() || j["values"].empty()) {
      throw ConfigError("sweep axis '" + axis.param + "' needs a non-empty 'values' array");
    }
    for (const auto& v : j["values"]) axis.values.push_back(number_or_inf(v, axis.param));
    return axis;
  }
  for (const char* key : {"start", "stop", "count"}) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw ConfigError("sweep axis '" + axis.param + "' needs numeric '" + key + "'");
    }
  }
  axis.start = j["start"].get<double>();
  axis.stop = j["stop"].get<double>();
  if (!j["count"].is_number_integer()) throw ConfigError("sweep axis count must be an integer");
  axis.count = j["count"].get<int>();
  if (axis.count < 2) throw ConfigError("sweep axis '" + axis.param + "' needs count >= 2");
  if (j.contains("spacing")) {
    const auto s = j["spacing"].get<std::string>();
    if (s == "linear") axis.spacing = Spacing::kLinear;
    else if (s == "log") axis.spacing = Spacing::kLog;
    else throw ConfigError("spacing must be 'linear' or 'log'");
  }
  if (axis.spacing == Spacing::kLog && !(axis.start > 0.0 && axis.stop > 0.0)) {
    throw ConfigError("log-spaced axis '" + axis.param + "' needs positive bounds");
  }
  return axis;
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::kDiagonal: return "diagonal";
    case Task::kPurity: return "purity";
    case Task::kHerald: return "herald";
    case Task::kTeleport: return "teleport";
    case Task::kSwap: return "swap";
  }
  return "?";
}

std::string to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kHbsm: return "hbsm";
    case DetectorKind::kPnr: return "pnr";
    case DetectorKind::kOnOff: return "onoff";
  }
  return "?";
}

const std::vector<std::string>& numeric_param_names() {
  static const std::vector<std::string> names = {"R", "delta", "eta_spd", "eta_hd", "N_det", "c", "n_max", "n_cut"};
  return names;
}

void set_param(ParamSet& p, const std::string& name, double value) {
  if (name == "R") p.R = value;
  else if (name == "delta") p.delta = value;
  else if (name == "eta_spd") p.eta_spd = value;
  else if (name == "eta_hd") p.eta_hd = value;
  else if (name == "c") p.c = value;
  else if (name == "N_det") p.N_det = std::isinf(value) && value > 0 ? std::nullopt : std::optional<int>(to_int(value, name));
  else if (name == "n_max") p.n_max = to_int(value, name);
  else if (name == "n_cut") p.n_cut = to_int(value, name);
  else throw ConfigError("unknown parameter '" + name + "'");
}

double get_param(const ParamSet& p, const std::string& name) {
  if (name == "R") return p.R;
  if (name == "delta") return p.delta;
  if (name == "eta_spd") return p.eta_spd;
  if (name == "eta_hd") return p.eta_hd;
  if (name == "c") return p.c;
  if (name == "N_det") return p.N_det ? *p.N_det : std::numeric_limits<double>::infinity();
  if (name == "n_max") return p.n_max;
  if (name == "n_cut") return p.n_cut;
  throw ConfigError("unknown parameter '" + name + "'");
}

std::vector<double> SweepAxis::points() const {
  if (!values.empty()) return values;
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] = spacing == Spacing::kLog
                                           ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                                           : start + f * (stop - start);
  }
  // pin endpoints exactly
  out.front() = start;
  out.back() = stop;
  return out;
}

// --- config -----------------------------------------------------------------

namespace {

SweepSpec parse_document(const ordered_json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kTopLevelKeys.begin(), kTopLevelKeys.end(), key) == kTopLevelKeys.end()) {
      throw ConfigError("unknown top-level key '" + key + "'");
    }
  }
  SweepSpec spec;
  if (!doc.contains("task") || !doc["task"].is_string()) throw ConfigError("config needs a string 'task'");
  spec.task = parse_task(doc["task"].get<std::string>());
  if (doc.contains("fixed")) spec.fixed = doc["fixed"];
  if (doc.contains("series")) {
    if (!doc["series"].is_array()) throw ConfigError("'series' must be an array");
    for (const auto& s : doc["series"]) {
      if (!s.is_object()) throw ConfigError("series entries must be objects");
      for (const auto& [key, _] : s.items()) {
        if (key != "label" && key != "set") throw ConfigError("unknown series key '" + key + "'");
      }
      Series series;
      if (s.contains("label")) series.label = s["label"].get<std::string>();
      if (s.contains("set")) series.overrides = s["set"];
      spec.series.push_back(std::move(series));
    }
  }
  if (doc.contains("sweep")) {
    if (!doc["sweep"].is_array()) throw ConfigError("'sweep' must be an array of axes");
    for (const auto& a : doc["sweep"]) spec.sweep.push_back(parse_axis(a));
  }
  if (spec.sweep.size() > 2) throw ConfigError("at most 2 swept axes are supported");
  if (spec.sweep.size() == 2 && spec.sweep[0].param == spec.sweep[1].param) {
    throw ConfigError("both sweep axes use '" + spec.sweep[0].param + "'");
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("'output' must be a string path");
    spec.output = doc["output"].get<std::string>();
  }
  // validates every point
  (void)expand_grid(spec);
  return spec;
}

}  // namespace

SweepSpec parse_sweep_spec(const ordered_json& doc) {
  try {
    return parse_document(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_sweep_spec(doc);
}

ordered_json to_json(const SweepSpec& spec) {
  ordered_json j;
  j["task"] = to_string(spec.task);
  j["fixed"] = spec.fixed;
  if (!spec.series.empty()) {
    ordered_json arr = ordered_json::array();
    for (const auto& s : spec.series) arr.push_back({{"label", s.label}, {"set", s.overrides}});
    j["series"] = std::move(arr);
  }
  ordered_json axes = ordered_json::array();
  for (const auto& a : spec.sweep) axes.push_back(axis_to_json(a));
  j["sweep"] = std::move(axes);
  j["output"] = spec.output;
  return j;
}

ParamSet fixed_params(const SweepSpec& spec) {
  ParamSet p;
  apply_overrides(p, spec.fixed, "'fixed'");
  return p;
}

std::vector<GridPoint> expand_grid(const SweepSpec& spec) {
  const ParamSet base = fixed_params(spec);
  std::vector<Series> series = spec.series;
  if (series.empty()) series.push_back(Series{});

  std::vector<std::vector<double>> axes;
  for (const auto& a : spec.sweep) axes.push_back(a.points());

  std::vector<GridPoint> grid;
  for (const auto& s : series) {
    ParamSet p = base;
    apply_overrides(p, s.overrides, "series '" + s.label + "'");
    const std::size_t n0 = axes.size() > 0 ? axes[0].size() : 1;
    const std::size_t n1 = axes.size() > 1 ? axes[1].size() : 1;
    for (std::size_t i = 0; i < n0; ++i) {
      for (std::size_t k = 0; k < n1; ++k) {
        ParamSet q = p;
        if (axes.size() > 0) set_param(q, spec.sweep[0].param, axes[0][i]);
        if (axes.size() > 1) set_param(q, spec.sweep[1].param, axes[1][k]);
        validate_params(q);
        grid.push_back({s.label, q});
      }
    }
  }
  return grid;
}

// --- evaluation -------------------------------------------------------------

PovmDiagonal build_detector(const ParamSet& p) {
  const std::size_t length = std::max<std::size_t>(kDefaultPovmLength, static_cast<std::size_t>(p.n_max) + 1);
  const Efficiency eta(p.eta_spd);
  switch (p.detector) {
    case DetectorKind::kHbsm:
      return assemble_hbsm(HbsmParams{Reflectivity(p.R), Window(p.delta), eta, Efficiency(p.eta_hd)}, length);
    case DetectorKind::kPnr:
      return pnr_single_click(eta, p.N_det ? Multiplexing(*p.N_det) : Multiplexing::infinite(), length);
    case DetectorKind::kOnOff:
      return spd_on_off(eta, length);
  }
  throw DomainError("unknown detector kind");
}

ResultRow evaluate_point(Task task, const GridPoint& point) {
  const ParamSet& p = point.params;
  ResultRow row;
  row.series = point.series;
  row.params = p;
  const auto detector = build_detector(p);
  const Truncation trunc(p.n_max);
  const auto ideal_on_off = spd_on_off(Efficiency(1.0), detector.size());

  auto fill_protocol = [&row](const ProtocolOutcome& out) {
    row.fidelity = out.fidelity;
    row.success_prob = out.success_prob;
    row.single_photon_prob = out.single_photon_prob;
    row.two_photon_prob = out.two_photon_prob;
  };

  switch (task) {
    case Task::kDiagonal:
    case Task::kPurity: {
      row.diagonal.assign(detector.entries().begin(), detector.entries().begin() + kDiagonalEntries);
      row.trace_0_4 = diagonal_trace(detector, kDiagonalEntries - 1);
      row.purity = purity(detector, p.n_cut);
      row.p_max = p_max(detector, p.n_cut);
      break;
    }
    case Task::kHerald:
      fill_protocol(herald(p.c, detector, p.input_kind, trunc));
      row.baseline_fidelity = herald_baseline(p.c, trunc);
      break;
    case Task::kTeleport: {
      const TeleportSetup setup(p.c, trunc);
      fill_protocol(setup.evaluate(detector));
      row.baseline_fidelity = setup.evaluate(ideal_on_off).fidelity;
      break;
    }
    case Task::kSwap: {
      const SwapSetup setup(p.c, trunc);
      fill_protocol(setup.evaluate(detector));
      row.baseline_fidelity = setup.evaluate(ideal_on_off).fidelity;
      break;
    }
  }
  return row;
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("HBSM_LAB_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::string describe(const GridPoint& point) {
  std::ostringstream os;
  if (!point.series.empty()) os << "series '" << point.series << "', ";
  os << "detector=" << to_string(point.params.detector);
  for (const auto& name : numeric_param_names()) os << ", " << name << "=" << format_number(get_param(point.params, name));
  return os.str();
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned workers) {
  const auto grid = expand_grid(spec);
  std::vector<std::optional<ResultRow>> results(grid.size());
  if (workers == 0) workers = default_worker_count();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.size())));

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::size_t> failed_index;
  std::string failure;

  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        results[i] = evaluate_point(spec.task, grid[i]);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failed_index || i < *failed_index) {
          failed_index = i;
          failure = e.what();
        }
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failed_index) {
    throw NumericalError("evaluation failed at grid point " + std::to_string(*failed_index) + " (" +
                         describe(grid[*failed_index]) + "): " + failure);
  }
  std::vector<ResultRow> rows;
  rows.reserve(results.size());
  for (auto& r : results) rows.push_back(std::move(*r));
  return rows;
}

const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> header = {
      "series", "detector", "R", "delta", "eta_spd", "eta_hd", "N_det", "c", "input_kind", "n_max", "n_cut",
      "fidelity", "baseline_fidelity", "success_prob", "single_photon_prob", "two_photon_prob",
      "purity", "p_max", "pi_0", "pi_1", "pi_2", "pi_3", "pi_4", "trace_0_4"};
  return header;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto& header = csv_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    const auto& p = row.params;
    std::vector<std::string> fields = {
        csv_field(row.series),
        to_string(p.detector),
        format_number(p.R),
        format_number(p.delta),
        format_number(p.eta_spd),
        format_number(p.eta_hd),
        p.N_det ? std::to_string(*p.N_det) : "inf",
        format_number(p.c),
        p.input_kind == InputKind::kPure ? "pure" : "mixed",
        std::to_string(p.n_max),
        std::to_string(p.n_cut),
        format_optional(row.fidelity),
        format_optional(row.baseline_fidelity),
        format_optional(row.success_prob),
        format_optional(row.single_photon_prob),
        format_optional(row.two_photon_prob),
        format_optional(row.purity),
        format_optional(row.p_max),
    };
    for (int n = 0; n < kDiagonalEntries; ++n) {
      fields.push_back(row.diagonal.empty() ? std::string{} : format_number(row.diagonal[static_cast<std::size_t>(n)]));
    }
    fields.push_back(format_optional(row.trace_0_4));
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  }
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

void run_sweep_to_file(const SweepSpec& spec, const std::string& path, unsigned workers) {
  const std::string target = path.empty() ? spec.output : path;
  if (target.empty()) throw ConfigError("no output path given");
  const auto rows = run_sweep(spec, workers);
  std::ofstream out(target, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + target + "'");
  write_csv(out, rows);
}

// --- crossover --------------------------------------------------------------

CrossoverMetric parse_crossover_metric(const std::string& name) {
  if (name == "purity") return CrossoverMetric::kPurity;
  if (name == "teleport_fidelity" || name == "teleport") return CrossoverMetric::kTeleportFidelity;
  if (name == "swap_fidelity" || name == "swap") return CrossoverMetric::kSwapFidelity;
  throw ConfigError("unknown crossover metric '" + name + "' (expected purity, teleport_fidelity or swap_fidelity)");
}

CrossoverResult run_crossover(CrossoverMetric metric, const SweepSpec& spec) {
  const ParamSet p = fixed_params(spec);
  validate_params(p);
  const HbsmDetector hybrid{Reflectivity(p.R), Window(p.delta), Efficiency(p.eta_hd)};
  const Multiplexing pnr = p.N_det ? Multiplexing(*p.N_det) : Multiplexing::infinite();
  CompareSettings settings;
  settings.weight = p.c;
  settings.n_cut = p.n_cut;
  settings.trunc = Truncation(p.n_max);
  return find_crossover(metric, hybrid, pnr, settings);
}

}  // namespace hbsm
