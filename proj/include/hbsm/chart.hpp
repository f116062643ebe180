#pragma once

// Static SVG charts drawn from sweep CSV files. Purely presentational: every
// value comes from the CSV.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hbsm/errors.hpp"

namespace hbsm {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws ConfigError when missing.
  std::size_t column(const std::string& name) const;
  /// Parsed numeric cell; empty for blank cells.
  std::optional<double> number(std::size_t row, std::size_t col) const;
};

/// RFC-4180 style reader (quoted fields, doubled quotes). Throws ConfigError
/// on ragged rows or unterminated quotes.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

enum class ChartKind { kLine, kHeatmap };

struct ChartSpec {
  ChartKind kind = ChartKind::kLine;
  /// Column names; empty picks a default (see README).
  std::string x;
  std::string y;
  std::string z;
  std::string title;
};

/// Writes a standalone SVG document.
void render_chart(const CsvTable& table, const ChartSpec& spec, std::ostream& out);
void render_chart_file(const std::string& csv_path, const ChartSpec& spec, const std::string& out_path);

}  // namespace hbsm
