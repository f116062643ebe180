#include "hbsm/chart.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

namespace hbsm {

namespace {

const std::vector<std::string> kParamColumns = {"R", "delta", "eta_spd", "eta_hd", "N_det", "c"};
const std::vector<std::string> kMetricColumns = {"fidelity", "purity", "success_prob", "trace_0_4", "pi_1"};

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Scale {
  double lo = 0.0;
  double hi = 1.0;
  bool log = false;
  double pixel_lo = 0.0;
  double pixel_hi = 1.0;

  static Scale fit(const std::vector<double>& values, double pixel_lo, double pixel_hi) {
    Scale s;
    s.pixel_lo = pixel_lo;
    s.pixel_hi = pixel_hi;
    if (values.empty()) return s;
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    s.lo = *mn;
    s.hi = *mx;
    s.log = s.lo > 0.0 && s.hi / s.lo > 100.0;
    if (s.hi == s.lo) {
      s.lo -= 0.5;
      s.hi += 0.5;
      s.log = false;
    }
    return s;
  }

  double operator()(double v) const {
    const double f = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo)) : (v - lo) / (hi - lo);
    return pixel_lo + f * (pixel_hi - pixel_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::ceil(std::log10(lo)); e <= std::floor(std::log10(hi)) + 1e-9; e += 1.0) {
        out.push_back(std::pow(10.0, e));
      }
    } else {
      for (int i = 0; i <= 5; ++i) out.push_back(lo + (hi - lo) * i / 5.0);
    }
    return out;
  }
};

std::vector<std::string> series_order(const CsvTable& t) {
  std::vector<std::string> order;
  const auto col = std::find(t.header.begin(), t.header.end(), "series");
  if (col == t.header.end()) return {""};
  const auto c = static_cast<std::size_t>(col - t.header.begin());
  for (const auto& row : t.rows) {
    if (std::find(order.begin(), order.end(), row[c]) == order.end()) order.push_back(row[c]);
  }
  return order;
}

std::string series_of(const CsvTable& t, std::size_t row) {
  const auto col = std::find(t.header.begin(), t.header.end(), "series");
  return col == t.header.end() ? std::string{} : t.rows[row][static_cast<std::size_t>(col - t.header.begin())];
}

bool varies(const CsvTable& t, const std::string& name, const std::string& series, bool within_series) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) return false;
  const auto col = static_cast<std::size_t>(it - t.header.begin());
  std::set<std::string> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (within_series && series_of(t, r) != series) continue;
    seen.insert(t.rows[r][col]);
  }
  return seen.size() > 1;
}

std::vector<std::string> varying_params(const CsvTable& t) {
  const auto first = series_order(t).front();
  std::vector<std::string> out;
  for (const auto& p : kParamColumns) {
    if (varies(t, p, first, true)) out.push_back(p);
  }
  if (out.empty()) {
    for (const auto& p : kParamColumns) {
      if (varies(t, p, first, false)) out.push_back(p);
    }
  }
  return out;
}

std::string first_metric(const CsvTable& t) {
  for (const auto& m : kMetricColumns) {
    const auto it = std::find(t.header.begin(), t.header.end(), m);
    if (it == t.header.end()) continue;
    const auto col = static_cast<std::size_t>(it - t.header.begin());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (t.number(r, col)) return m;
    }
  }
  throw ConfigError("CSV has no metric column with values");
}

void svg_open(std::ostream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
        << "</text>\n";
  }
}

void svg_axes(std::ostream& out, const Scale& xs, const Scale& ys, const std::string& xlabel,
              const std::string& ylabel) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : xs.ticks()) {
    const double px = xs(t);
    out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5
        << "\" stroke=\"black\"/>\n<text x=\"" << px << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">"
        << fmt(t) << "</text>\n";
  }
  for (double t : ys.ticks()) {
    const double py = ys(t);
    out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py
        << "\" stroke=\"black\"/>\n<text x=\"" << x0 - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
        << fmt(t) << "</text>\n";
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << escape(xlabel)
      << (xs.log ? " (log)" : "") << "</text>\n";
  out << "<text transform=\"translate(18," << (y0 + y1) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(ylabel) << (ys.log ? " (log)" : "") << "</text>\n";
}

std::string viridis(double f) {
  static const std::array<std::array<double, 3>, 5> stops = {{{68, 1, 84}, {59, 82, 139}, {33, 145, 140},
                                                              {94, 201, 98}, {253, 231, 37}}};
  f = std::clamp(f, 0.0, 1.0) * 4.0;
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(f), 3);
  const double w = f - static_cast<double>(i);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[i][0] + w * (stops[i + 1][0] - stops[i][0]))),
                static_cast<int>(std::lround(stops[i][1] + w * (stops[i + 1][1] - stops[i][1]))),
                static_cast<int>(std::lround(stops[i][2] + w * (stops[i + 1][2] - stops[i][2]))));
  return buf;
}

void render_line(const CsvTable& t, const ChartSpec& spec, std::ostream& out) {
  std::string xname = spec.x;
  if (xname.empty()) {
    const auto params = varying_params(t);
    if (params.empty()) throw ConfigError("cannot infer the x column; pass --x");
    xname = params.front();
  }
  const std::string yname = spec.y.empty() ? first_metric(t) : spec.y;
  const auto xc = t.column(xname);
  const auto yc = t.column(yname);

  std::vector<double> xv, yv;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto x = t.number(r, xc);
    const auto y = t.number(r, yc);
    if (x && y && std::isfinite(*x) && std::isfinite(*y)) {
      xv.push_back(*x);
      yv.push_back(*y);
    }
  }
  if (xv.empty()) throw ConfigError("no plottable points for " + yname + " vs " + xname);
  const Scale xs = Scale::fit(xv, kLeft, kWidth - kRight);
  Scale ys = Scale::fit(yv, kHeight - kBottom, kTop);

  svg_open(out, spec.title);
  svg_axes(out, xs, ys, xname, yname);
  const auto order = series_order(t);
  for (std::size_t s = 0; s < order.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    std::vector<std::vector<std::pair<double, double>>> segments(1);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (series_of(t, r) != order[s]) continue;
      const auto x = t.number(r, xc);
      const auto y = t.number(r, yc);
      if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
        // undefined value: break the curve
        if (!segments.back().empty()) segments.emplace_back();
        continue;
      }
      segments.back().emplace_back(xs(*x), ys(*y));
    }
    for (const auto& seg : segments) {
      if (seg.empty()) continue;
      if (seg.size() == 1) {
        out << "<circle cx=\"" << seg[0].first << "\" cy=\"" << seg[0].second << "\" r=\"2.5\" fill=\"" << color
            << "\"/>\n";
        continue;
      }
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
      for (const auto& [px, py] : seg) out << px << ',' << py << ' ';
      out << "\"/>\n";
    }
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(s);
    const double lx = kWidth - kRight + 12.0;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n<text x=\"" << lx + 26 << "\" y=\"" << ly << "\">"
        << escape(order[s].empty() ? yname : order[s]) << "</text>\n";
  }
  out << "</svg>\n";
}

void render_heatmap(const CsvTable& t, const ChartSpec& spec, std::ostream& out) {
  std::string xname = spec.x, yname = spec.y;
  if (xname.empty() || yname.empty()) {
    const auto params = varying_params(t);
    if (params.size() < 2) throw ConfigError("heatmap needs two varying parameters; pass --x and --y");
    if (xname.empty()) xname = params[0];
    if (yname.empty()) yname = params[1] == xname ? params[0] : params[1];
  }
  const std::string zname = spec.z.empty() ? (t.column("success_prob"), std::string("success_prob")) : spec.z;
  const auto xc = t.column(xname), yc = t.column(yname), zc = t.column(zname);

  std::set<double> xset, yset;
  std::vector<double> zv;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto x = t.number(r, xc), y = t.number(r, yc);
    if (!x || !y) continue;
    xset.insert(*x);
    yset.insert(*y);
    if (const auto z = t.number(r, zc)) zv.push_back(*z);
  }
  if (xset.size() < 2 || yset.size() < 2 || zv.empty()) throw ConfigError("heatmap needs a 2-D grid with values");
  const std::vector<double> xs_v(xset.begin(), xset.end()), ys_v(yset.begin(), yset.end());
  const Scale xs = Scale::fit(xs_v, kLeft, kWidth - kRight);
  const Scale ys = Scale::fit(ys_v, kHeight - kBottom, kTop);
  const Scale zs = Scale::fit(zv, 0.0, 1.0);

  // cell edges halfway between neighbouring grid values (in plot space)
  auto edges = [](const std::vector<double>& v, const Scale& s) {
    std::vector<double> e(v.size() + 1);
    for (std::size_t i = 1; i < v.size(); ++i) e[i] = 0.5 * (s(v[i - 1]) + s(v[i]));
    e.front() = s(v.front()) - (e[1] - s(v.front()));
    e.back() = s(v.back()) + (s(v.back()) - e[v.size() - 1]);
    return e;
  };
  const auto xe = edges(xs_v, xs), ye = edges(ys_v, ys);

  svg_open(out, spec.title);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto x = t.number(r, xc), y = t.number(r, yc), z = t.number(r, zc);
    if (!x || !y || !z) continue;
    const auto i = static_cast<std::size_t>(std::lower_bound(xs_v.begin(), xs_v.end(), *x) - xs_v.begin());
    const auto j = static_cast<std::size_t>(std::lower_bound(ys_v.begin(), ys_v.end(), *y) - ys_v.begin());
    const double left = std::min(xe[i], xe[i + 1]), right = std::max(xe[i], xe[i + 1]);
    const double top = std::min(ye[j], ye[j + 1]), bottom = std::max(ye[j], ye[j + 1]);
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left << "\" height=\""
        << bottom - top << "\" fill=\"" << viridis(zs(*z)) << "\"/>\n";
  }
  svg_axes(out, xs, ys, xname, yname);
  const double bx = kWidth - kRight + 30.0;
  for (int k = 0; k < 50; ++k) {
    const double f = k / 49.0;
    out << "<rect x=\"" << bx << "\" y=\"" << kHeight - kBottom - (k + 1) * (kHeight - kBottom - kTop) / 50.0
        << "\" width=\"18\" height=\"" << (kHeight - kBottom - kTop) / 50.0 + 0.5 << "\" fill=\"" << viridis(f)
        << "\"/>\n";
  }
  const double zlo = zs.lo, zhi = zs.hi;
  out << "<text x=\"" << bx + 24 << "\" y=\"" << kHeight - kBottom << "\">" << fmt(zlo) << "</text>\n";
  out << "<text x=\"" << bx + 24 << "\" y=\"" << kTop + 10 << "\">" << fmt(zhi) << "</text>\n";
  out << "<text x=\"" << bx << "\" y=\"" << kTop - 8 << "\">" << escape(zname) << (zs.log ? " (log)" : "")
      << "</text>\n";
  out << "</svg>\n";
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::optional<double> CsvTable::number(std::size_t row, std::size_t col) const {
  const auto& cell = rows.at(row).at(col);
  if (cell.empty()) return std::nullopt;
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

CsvTable parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (quoted) throw ConfigError("malformed CSV: unterminated quoted field");
  if (!field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (!any || records.empty()) throw ConfigError("malformed CSV: empty input");

  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header.size()) {
      throw ConfigError("malformed CSV: row " + std::to_string(i) + " has " + std::to_string(records[i].size()) +
                        " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open CSV '" + path + "'");
  return parse_csv(in);
}

void render_chart(const CsvTable& table, const ChartSpec& spec, std::ostream& out) {
  if (table.rows.empty()) throw ConfigError("CSV has no data rows");
  if (spec.kind == ChartKind::kLine) render_line(table, spec, out);
  else render_heatmap(table, spec, out);
}

void render_chart_file(const std::string& csv_path, const ChartSpec& spec, const std::string& out_path) {
  const auto table = read_csv(csv_path);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + out_path + "'");
  render_chart(table, spec, out);
}

}  // namespace hbsm
