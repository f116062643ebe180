// hbsm-lab: sweeps, figure presets, charts and crossover searches.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hbsm/chart.hpp"
#include "hbsm/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int run_sweep_command(const std::string& config, const std::string& out) {
  const auto spec = hbsm::load_sweep_spec(config);
  const std::string target = out.empty() ? spec.output : out;
  if (target.empty()) {
    std::cout << hbsm::to_csv(hbsm::run_sweep(spec));
    return 0;
  }
  hbsm::run_sweep_to_file(spec, target);
  std::cerr << "wrote " << target << '\n';
  return 0;
}

int run_preset_command(const std::string& name, const std::string& dir, bool list) {
  if (list) {
    for (const auto& n : hbsm::preset_names()) std::cout << n << '\n';
    return 0;
  }
  if (name.empty()) throw hbsm::ConfigError("preset needs a name (use --list to see them)");
  const auto specs = hbsm::figure_preset(name);
  std::filesystem::create_directories(dir);
  for (const auto& spec : specs) {
    const auto path = (std::filesystem::path(dir) / spec.output).string();
    hbsm::run_sweep_to_file(spec, path);
    std::cerr << "wrote " << path << '\n';
  }
  return 0;
}

int run_chart_command(const std::string& csv, const std::string& kind, hbsm::ChartSpec spec,
                      const std::string& out) {
  if (kind == "line") spec.kind = hbsm::ChartKind::kLine;
  else if (kind == "heatmap") spec.kind = hbsm::ChartKind::kHeatmap;
  else throw hbsm::ConfigError("unknown chart kind '" + kind + "' (expected line or heatmap)");
  hbsm::render_chart_file(csv, spec, out);
  std::cerr << "wrote " << out << '\n';
  return 0;
}

int run_crossover_command(const std::string& metric_name, const std::string& config) {
  const auto metric = hbsm::parse_crossover_metric(metric_name);
  std::ifstream in(config);
  if (!in) throw hbsm::ConfigError("cannot open config file '" + config + "'");
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw hbsm::ConfigError("config '" + config + "' is not valid JSON: " + e.what());
  }
  // only the fixed block matters here
  if (doc.is_object() && !doc.contains("task")) doc["task"] = "purity";
  const auto spec = hbsm::parse_sweep_spec(doc);
  const auto result = hbsm::run_crossover(metric, spec);
  if (result.efficiency) {
    std::printf("crossover eta_spd = %.6f (bracket %.1e)\n", *result.efficiency, result.bracket);
  } else {
    std::printf("no crossover on (0, 1]\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid Bell-state measurement simulator"};
  app.require_subcommand(1);

  std::string sweep_config, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep->add_option("--config", sweep_config, "JSON sweep configuration")->required();
  sweep->add_option("--out", sweep_out, "CSV path (overrides the config's output; stdout if neither is set)");

  std::string preset_name, preset_dir = ".";
  bool preset_list = false;
  auto* preset = app.add_subcommand("preset", "Regenerate the data behind a figure");
  preset->add_option("name", preset_name, "Preset name, e.g. fig3 or fig9");
  preset->add_option("--out", preset_dir, "Output directory");
  preset->add_flag("--list", preset_list, "List the available presets");

  std::string chart_csv, chart_kind = "line", chart_out;
  hbsm::ChartSpec chart_spec;
  auto* chart = app.add_subcommand("chart", "Render a sweep CSV as SVG");
  chart->add_option("--csv", chart_csv, "Input CSV")->required();
  chart->add_option("--kind", chart_kind, "line or heatmap");
  chart->add_option("--out", chart_out, "Output SVG")->required();
  chart->add_option("--x", chart_spec.x, "x column");
  chart->add_option("--y", chart_spec.y, "y column");
  chart->add_option("--z", chart_spec.z, "colour column for heatmaps");
  chart->add_option("--title", chart_spec.title, "Chart title");

  std::string crossover_metric, crossover_config;
  auto* crossover = app.add_subcommand("crossover", "Find where a PNR detector overtakes the hybrid one");
  crossover->add_option("--metric", crossover_metric, "purity, teleport_fidelity or swap_fidelity")->required();
  crossover->add_option("--config", crossover_config, "JSON configuration (fixed block)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sweep) return run_sweep_command(sweep_config, sweep_out);
    if (*preset) return run_preset_command(preset_name, preset_dir, preset_list);
    if (*chart) return run_chart_command(chart_csv, chart_kind, chart_spec, chart_out);
    if (*crossover) return run_crossover_command(crossover_metric, crossover_config);
  } catch (const hbsm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hbsm::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hbsm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
