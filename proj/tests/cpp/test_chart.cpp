#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "hbsm/chart.hpp"
#include "hbsm/sweep.hpp"

using namespace hbsm;

namespace {

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::string render(const std::string& csv, ChartSpec spec) {
  std::istringstream in(csv);
  std::ostringstream out;
  render_chart(parse_csv(in), spec, out);
  return out.str();
}

std::string preset_csv(const char* name) { return to_csv(run_sweep(figure_preset(name).front(), 1)); }

}  // namespace

TEST_CASE("CSV reader") {
  std::istringstream in("a,b,c\r\n\"x, y\",2,\"say \"\"hi\"\"\"\n,inf,3");
  const auto t = parse_csv(in);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "x, y");
  CHECK(t.rows[0][2] == "say \"hi\"");
  CHECK_FALSE(t.number(1, 0).has_value());
  CHECK(std::isinf(*t.number(1, 1)));
  CHECK(*t.number(1, 2) == 3.0);
  CHECK(t.column("c") == 2);
  CHECK_THROWS_AS(t.column("d"), ConfigError);

  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(parse_csv(ragged), ConfigError);
  std::istringstream open("a\n\"oops\n");
  CHECK_THROWS_AS(parse_csv(open), ConfigError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_csv(empty), ConfigError);
  CHECK_THROWS_AS(read_csv("/nonexistent.csv"), ConfigError);
}

TEST_CASE("line chart with one curve per series") {
  const auto svg = render(preset_csv("fig3a"), {});
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "<polyline") == 4);
  CHECK(svg.find("delta (log)") != std::string::npos);
  CHECK(svg.find("eta_hd=1 eta_spd=0.9") != std::string::npos);
}

TEST_CASE("heatmap over two swept parameters") {
  const auto svg = render(preset_csv("fig5"), {ChartKind::kHeatmap, "", "", "", "success"});
  CHECK(count(svg, "<rect") >= 41 * 41);
  CHECK(svg.find("success_prob") != std::string::npos);
}

TEST_CASE("undefined cells are skipped rather than drawn as zeros") {
  const auto csv = to_csv(run_sweep(parse_sweep_spec(nlohmann::ordered_json::parse(
                                        R"({"task": "swap", "sweep": [{"param": "c", "values": [0, 0.25, 0.5, 0.75, 1]}]})")),
                                    1));
  const auto svg = render(csv, {});
  CHECK(count(svg, "<polyline") == 1);
  const auto start = svg.find("points=\"");
  const auto stop = svg.find('"', start + 8);
  const auto points = svg.substr(start + 8, stop - start - 8);
  CHECK(count(points, ",") == 4);

  // a gap in the middle splits the curve
  const std::string gappy = "series,c,fidelity\ns,0.1,0.9\ns,0.2,0.8\ns,0.3,\ns,0.4,0.7\ns,0.5,0.6\n";
  CHECK(count(render(gappy, {}), "<polyline") == 2);
}

TEST_CASE("chart errors") {
  CHECK_THROWS_AS(render("series,c,fidelity\n", {}), ConfigError);
  CHECK_THROWS_AS(render("series,c,fidelity\ns,0.1,\ns,0.2,\n", {}), ConfigError);
  CHECK_THROWS_AS(render("series,c,fidelity\ns,0.1,0.5\ns,0.2,0.6\n", {ChartKind::kHeatmap, "", "", "", ""}), ConfigError);
  CHECK_THROWS_AS(render("series,c,fidelity\ns,0.1,0.5\n", {ChartKind::kLine, "c", "nope", "", ""}), ConfigError);
}
