#pragma once

// Tabular output with a provenance header. CSV carries the header as
// "# key=value" comment lines; JSON output is newline-delimited, with the
// header as the first object. Floating-point cells use 17 significant digits
// so values round-trip exactly.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "latentrd/bounds.hpp"
#include "latentrd/oracles.hpp"
#include "latentrd/verify.hpp"

namespace latentrd::io {

inline constexpr std::string_view kSchemaVersion = "v1";

enum class Format { Csv, Json };

std::string_view to_string(Format format) noexcept;
/// Accepts "csv" or "json"; throws DomainError otherwise.
Format parse_format(std::string_view text);

/// Build identifier: library version plus compiler.
std::string build_id();

struct Provenance {
  std::string subcommand;
  /// Every effective parameter, already formatted, in a fixed order.
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
};

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws DimensionError if the row width differs from the column count.
  void add_row(std::vector<Cell> row);
};

/// "%.17g"; non-finite values print as nan, inf, -inf.
std::string format_double(double v);
std::string format_cell(const Cell& cell);

void write_table(std::ostream& os, const Provenance& prov, const Table& table, Format format);

/// One row per report. Columns are the fixed fields followed by the union
/// of term, aux and validity labels in first-seen order; missing cells are empty.
Table bound_reports_table(const std::vector<bounds::BoundReport>& reports);

/// slope, rate_nats, distortion, iterations, converged, plus the dual bound.
Table rd_curve_table(const std::vector<oracles::RDCurvePoint>& points);

/// One row per check, then one row per stat.
Table suite_table(const std::vector<verify::SuiteReport>& reports);

}  // namespace latentrd::io
