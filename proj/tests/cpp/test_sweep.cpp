#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "hbsm/sweep.hpp"

using namespace hbsm;
using nlohmann::ordered_json;

namespace {

SweepSpec parse(const std::string& text) { return parse_sweep_spec(ordered_json::parse(text)); }

}  // namespace

TEST_CASE("a minimal config") {
  const auto spec = parse(R"({"task": "purity", "fixed": {"R": 0.2},
                              "sweep": [{"param": "delta", "start": 0.1, "stop": 1.0, "count": 4}]})");
  CHECK(spec.task == Task::kPurity);
  const auto grid = expand_grid(spec);
  REQUIRE(grid.size() == 4);
  CHECK(grid[0].params.delta == 0.1);
  CHECK(grid[3].params.delta == 1.0);
  CHECK(grid[1].params.delta == doctest::Approx(0.4));
  CHECK(grid[2].params.R == 0.2);
  CHECK(grid[2].params.eta_hd == 0.9);
}

TEST_CASE("grid order is series-major then lexicographic in the axes") {
  const auto spec = parse(R"({"task": "herald",
      "series": [{"label": "a", "set": {"R": 0.1}}, {"label": "b", "set": {"R": 0.2}}],
      "sweep": [{"param": "delta", "values": [0.1, 0.2]},
                {"param": "c", "values": [0.3, 0.4, 0.5]}]})");
  const auto grid = expand_grid(spec);
  REQUIRE(grid.size() == 12);
  CHECK(grid[0].series == "a");
  CHECK(grid[1].params.c == 0.4);
  CHECK(grid[1].params.delta == 0.1);
  CHECK(grid[3].params.delta == 0.2);
  CHECK(grid[6].series == "b");
  CHECK(grid[6].params.R == 0.2);
}

TEST_CASE("log spacing and infinite values") {
  const auto spec = parse(R"({"task": "purity", "fixed": {"detector": "pnr", "N_det": "inf"},
      "sweep": [{"param": "eta_spd", "start": 0.01, "stop": 1, "count": 3, "spacing": "log"}]})");
  const auto pts = spec.sweep[0].points();
  CHECK(pts[1] == doctest::Approx(0.1));
  CHECK_FALSE(fixed_params(spec).N_det.has_value());
  const auto back = to_json(spec);
  CHECK(back["fixed"]["N_det"] == "inf");
}

TEST_CASE("config errors are reported as ConfigError") {
  const char* bad[] = {
      R"({"task": "purity", "fixed": {"R": 1.5}})",
      R"({"task": "purity", "fixed": {"delta": -1}})",
      R"({"task": "purity", "fixed": {"eta_spd": 2}})",
      R"({"task": "purity", "fixed": {"eta_hd": -0.5}})",
      R"({"task": "purity", "fixed": {"N_det": 0}})",
      R"({"task": "herald", "fixed": {"c": 1.1}})",
      R"({"task": "purity", "fixed": {"n_max": 11}})",
      R"({"task": "purity", "fixed": {"n_cut": 9}})",
      R"({"task": "purity", "fixed": {"bogus": 1}})",
      R"({"task": "purity", "extra": 1})",
      R"({"task": "dance"})",
      R"({"fixed": {}})",
      R"({"task": "purity", "fixed": {"detector": "camera"}})",
      R"({"task": "purity", "sweep": [{"param": "R", "start": 0.1, "stop": 0.5, "count": 1}]})",
      R"({"task": "purity", "sweep": [{"param": "R", "start": 0, "stop": 0.5, "count": 3, "spacing": "log"}]})",
      R"({"task": "purity", "sweep": [{"param": "R", "start": 0.1, "stop": 1.5, "count": 3}]})",
      R"({"task": "purity", "sweep": [{"param": "R", "values": [0.1]}, {"param": "delta", "values": [1]},
                                       {"param": "c", "values": [0.5]}]})",
      R"({"task": "purity", "sweep": [{"param": "R", "values": [0.1]}, {"param": "R", "values": [0.2]}]})",
      R"({"task": "purity", "sweep": [{"param": "colour", "values": [0.1]}]})",
      R"({"task": "purity", "fixed": {"R": "high"}})",
      R"({"task": "purity", "fixed": {"n_max": 4.5}})",
      R"([1, 2, 3])",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse(text), ConfigError);
  }
  CHECK_THROWS_AS(load_sweep_spec("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("every preset round-trips through the config format") {
  for (const auto& name : preset_names()) {
    for (const auto& spec : figure_preset(name)) {
      CAPTURE(name);
      const auto text = to_json(spec).dump(2);
      CHECK(parse(text) == spec);
    }
  }
  CHECK(figure_preset("fig3").size() == 2);
  CHECK(figure_preset("fig10").size() == 2);
  CHECK_THROWS_AS(figure_preset("fig99"), ConfigError);
}

TEST_CASE("preset shapes") {
  const auto fig3a = figure_preset("fig3a").front();
  CHECK(fig3a.series.size() == 4);
  CHECK(expand_grid(fig3a).size() == 4 * 81);
  const auto fig5 = figure_preset("fig5").front();
  CHECK(fig5.task == Task::kHerald);
  CHECK(fig5.sweep.size() == 2);
  const auto fig2 = run_sweep(figure_preset("fig2").front(), 1);
  REQUIRE(fig2.size() == 4);
  const double expected[] = {0.824, 0.156, 0.037, 0.00015};
  for (std::size_t i = 0; i < 4; ++i) CHECK(*fig2[i].trace_0_4 == doctest::Approx(expected[i]).epsilon(0.015));
}

TEST_CASE("CSV bytes do not depend on the number of workers") {
  for (const char* name : {"fig7", "fig9", "fig4a"}) {
    const auto spec = figure_preset(name).front();
    const auto serial = to_csv(run_sweep(spec, 1));
    CHECK(serial == to_csv(run_sweep(spec, 3)));
    CHECK(serial == to_csv(run_sweep(spec, 8)));
    CHECK(serial == to_csv(run_sweep(spec, 1)));
  }
}

TEST_CASE("a one-point sweep equals the direct call") {
  const auto spec = parse(R"({"task": "teleport",
      "fixed": {"R": 0.3, "delta": 0.5, "eta_spd": 0.7, "eta_hd": 0.8},
      "sweep": [{"param": "c", "values": [0.4]}]})");
  const auto rows = run_sweep(spec, 1);
  REQUIRE(rows.size() == 1);
  const auto det = assemble_hbsm({Reflectivity(0.3), Window(0.5), Efficiency(0.7), Efficiency(0.8)});
  const auto direct = teleport(0.4, det);
  CHECK(*rows[0].fidelity == *direct.fidelity);
  CHECK(*rows[0].success_prob == direct.success_prob);
  CHECK(*rows[0].baseline_fidelity == *teleport(0.4, spd_on_off(Efficiency(1.0))).fidelity);

  const auto no_axes = run_sweep(parse(R"({"task": "purity", "fixed": {"R": 0.3, "delta": 0.5}})"), 1);
  REQUIRE(no_axes.size() == 1);
  const auto d = assemble_hbsm({Reflectivity(0.3), Window(0.5), Efficiency(0.5), Efficiency(0.9)});
  CHECK(*no_axes[0].purity == *purity(d));
  CHECK(*no_axes[0].p_max == p_max(d));
}

TEST_CASE("undefined values become empty CSV fields") {
  const auto spec = parse(R"({"task": "swap", "sweep": [{"param": "c", "values": [0, 0.5]}]})");
  const auto csv = to_csv(run_sweep(spec, 1));
  std::istringstream in(csv);
  std::string header, zero, half;
  std::getline(in, header);
  std::getline(in, zero);
  std::getline(in, half);
  CHECK(header.rfind("series,detector,R,delta", 0) == 0);
  // series, detector, 9 parameters, then fidelity and baseline
  CHECK(zero.find(",4,2,,,0,") != std::string::npos);
  CHECK(zero.find("nan") == std::string::npos);
  CHECK(half.find(",4,2,,") == std::string::npos);
}

TEST_CASE("worker count comes from the environment") {
  ::setenv("HBSM_LAB_WORKERS", "3", 1);
  CHECK(default_worker_count() == 3);
  ::setenv("HBSM_LAB_WORKERS", "zero", 1);
  CHECK(default_worker_count() >= 1);
  ::unsetenv("HBSM_LAB_WORKERS");
  CHECK(default_worker_count() >= 1);
}

TEST_CASE("crossover from a config") {
  const auto spec = parse(R"({"task": "purity", "fixed": {"R": 0.1, "delta": 0.1, "eta_hd": 0.9}})");
  const auto r = run_crossover(parse_crossover_metric("purity"), spec);
  REQUIRE(r.efficiency.has_value());
  CHECK(*r.efficiency == doctest::Approx(0.8512).epsilon(1e-3));
  CHECK_THROWS_AS(parse_crossover_metric("speed"), ConfigError);
}
