#include <map>
#include <string>

#include "hbsm/sweep.hpp"

namespace hbsm {

using nlohmann::ordered_json;

namespace {

SweepAxis range(std::string param, double start, double stop, int count, Spacing spacing) {
  SweepAxis axis;
  axis.param = std::move(param);
  axis.start = start;
  axis.stop = stop;
  axis.count = count;
  axis.spacing = spacing;
  return axis;
}

SweepAxis values(std::string param, std::vector<double> v) {
  SweepAxis axis;
  axis.param = std::move(param);
  axis.values = std::move(v);
  return axis;
}

SweepSpec make(Task task, ordered_json fixed, std::vector<Series> series, std::vector<SweepAxis> sweep,
               std::string output) {
  return SweepSpec{task, std::move(fixed), std::move(series), std::move(sweep), std::move(output)};
}

// Detectors compared against the hybrid measurement as a function of eta_spd.
std::vector<Series> pnr_comparison(const std::vector<ordered_json>& multiplexing) {
  std::vector<Series> out = {
      {"hbsm delta=0.1", {{"detector", "hbsm"}, {"delta", 0.1}}},
      {"hbsm delta=1", {{"detector", "hbsm"}, {"delta", 1.0}}},
  };
  for (const auto& n : multiplexing) {
    const std::string label = n.is_string() ? n.get<std::string>() : std::to_string(n.get<int>());
    out.push_back({"pnr N=" + label, {{"detector", "pnr"}, {"N_det", n}}});
  }
  return out;
}

std::map<std::string, SweepSpec> panels() {
  std::map<std::string, SweepSpec> p;

  // Diagonal elements at R = 0.1 for four windows.
  p["fig2"] = make(Task::kDiagonal,
                   {{"detector", "hbsm"}, {"R", 0.1}, {"eta_spd", 0.9}, {"eta_hd", 0.9}},
                   {}, {values("delta", {10.0, 1.0, 0.25, 0.001})}, "fig2.csv");

  const std::vector<Series> purity_curves = {
      {"eta_hd=0.9 eta_spd=0.5", {{"eta_hd", 0.9}, {"eta_spd", 0.5}}},
      {"eta_hd=0.9 eta_spd=0.9", {{"eta_hd", 0.9}, {"eta_spd", 0.9}}},
      {"eta_hd=1 eta_spd=0.5", {{"eta_hd", 1.0}, {"eta_spd", 0.5}}},
      {"eta_hd=1 eta_spd=0.9", {{"eta_hd", 1.0}, {"eta_spd", 0.9}}},
  };
  p["fig3a"] = make(Task::kPurity, {{"detector", "hbsm"}, {"R", 0.1}}, purity_curves,
                    {range("delta", 1e-3, 10.0, 81, Spacing::kLog)}, "fig3a.csv");
  p["fig3c"] = make(Task::kPurity, {{"detector", "hbsm"}, {"delta", 0.1}}, purity_curves,
                    {range("R", 1e-3, 1.0, 61, Spacing::kLog)}, "fig3c.csv");

  const ordered_json herald_fixed = {{"detector", "hbsm"}, {"eta_hd", 0.9}, {"eta_spd", 0.5}};
  auto herald_fixed_with = [&](const char* key, double v) {
    auto f = herald_fixed;
    f[key] = v;
    return f;
  };
  p["fig4a"] = make(Task::kHerald, herald_fixed_with("delta", 0.1),
                    {{"R=0.01", {{"R", 0.01}}}, {"R=0.1", {{"R", 0.1}}}, {"R=0.5", {{"R", 0.5}}}, {"R=0.9", {{"R", 0.9}}}},
                    {range("c", 0.0, 1.0, 101, Spacing::kLinear)}, "fig4a.csv");
  p["fig4c"] = make(Task::kHerald, herald_fixed_with("R", 0.1),
                    {{"delta=0.1", {{"delta", 0.1}}},
                     {"delta=0.5", {{"delta", 0.5}}},
                     {"delta=1", {{"delta", 1.0}}},
                     {"delta=2", {{"delta", 2.0}}}},
                    {range("c", 0.0, 1.0, 101, Spacing::kLinear)}, "fig4c.csv");
  p["fig5"] = make(Task::kHerald, herald_fixed_with("c", 0.5), {},
                   {range("delta", 1e-3, 2.0, 41, Spacing::kLog), range("R", 1e-3, 1.0, 41, Spacing::kLog)},
                   "fig5.csv");

  const ordered_json protocol_fixed = {{"detector", "hbsm"}, {"delta", 0.1}, {"eta_hd", 0.9}, {"eta_spd", 0.5}};
  const std::vector<Series> reflectivities = {
      {"R=0.01", {{"R", 0.01}}}, {"R=0.1", {{"R", 0.1}}}, {"R=0.3", {{"R", 0.3}}}, {"R=0.5", {{"R", 0.5}}}};
  p["fig6"] = make(Task::kTeleport, protocol_fixed, reflectivities, {range("c", 0.0, 1.0, 101, Spacing::kLinear)},
                   "fig6.csv");
  p["fig7"] = make(Task::kSwap, protocol_fixed, reflectivities, {range("c", 0.0, 1.0, 101, Spacing::kLinear)},
                   "fig7.csv");

  const ordered_json comparison_fixed = {{"R", 0.1}, {"eta_hd", 0.9}, {"c", 0.5}, {"n_cut", 2}};
  p["fig9"] = make(Task::kPurity, comparison_fixed, pnr_comparison({1, 2, "inf"}),
                   {range("eta_spd", 0.01, 1.0, 100, Spacing::kLinear)}, "fig9.csv");
  p["fig10t"] = make(Task::kTeleport, comparison_fixed, pnr_comparison({1, 2, 5, "inf"}),
                     {range("eta_spd", 0.01, 1.0, 100, Spacing::kLinear)}, "fig10t.csv");
  p["fig10s"] = make(Task::kSwap, comparison_fixed, pnr_comparison({1, 2, 5, "inf"}),
                     {range("eta_spd", 0.01, 1.0, 100, Spacing::kLinear)}, "fig10s.csv");
  return p;
}

const std::map<std::string, std::vector<std::string>>& groups() {
  static const std::map<std::string, std::vector<std::string>> g = {
      {"fig3", {"fig3a", "fig3c"}},
      {"fig4", {"fig4a", "fig4c"}},
      {"fig10", {"fig10t", "fig10s"}},
  };
  return g;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : panels()) names.push_back(name);
  for (const auto& [name, _] : groups()) names.push_back(name);
  return names;
}

std::vector<SweepSpec> figure_preset(const std::string& name) {
  const auto all = panels();
  if (auto it = all.find(name); it != all.end()) return {it->second};
  if (auto it = groups().find(name); it != groups().end()) {
    std::vector<SweepSpec> out;
    for (const auto& panel : it->second) out.push_back(all.at(panel));
    return out;
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "'; available presets: " + known);
}

}  // namespace hbsm
