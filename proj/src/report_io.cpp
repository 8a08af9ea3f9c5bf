#include "latentrd/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "latentrd/errors.hpp"

#ifndef LATENTRD_VERSION
#define LATENTRD_VERSION "unknown"
#endif

namespace latentrd::io {
namespace {

nlohmann::ordered_json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          // JSON has no inf/nan; those travel as strings.
          if (!std::isfinite(v)) return format_double(v);
          return v;
        } else {
          return v;
        }
      },
      cell);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::size_t column_index(std::vector<std::string>& columns, const std::string& name) {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it != columns.end()) return static_cast<std::size_t>(it - columns.begin());
  columns.push_back(name);
  return columns.size() - 1;
}

}  // namespace

std::string_view to_string(Format format) noexcept { return format == Format::Csv ? "csv" : "json"; }

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json" || text == "jsonl") return Format::Json;
  throw DomainError("unknown format '" + std::string(text) + "' (expected csv or json)");
}

std::string build_id() {
  std::string id = "latentrd-" LATENTRD_VERSION;
#if defined(__clang__)
  id += "-clang-" __clang_version__;
#elif defined(__GNUC__)
  id += "-gcc-" + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__);
#endif
  return id;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw DimensionError("table row has " + std::to_string(row.size()) + " cells, expected " +
                         std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return v;
      },
      cell);
}

void write_table(std::ostream& os, const Provenance& prov, const Table& table, Format format) {
  if (format == Format::Csv) {
    os << "# schema=" << kSchemaVersion << '\n';
    os << "# subcommand=" << prov.subcommand << '\n';
    os << "# seed=" << prov.seed << '\n';
    os << "# build=" << build_id() << '\n';
    for (const auto& [k, v] : prov.params) os << "# " << k << '=' << v << '\n';
    for (std::size_t j = 0; j < table.columns.size(); ++j)
      os << (j ? "," : "") << csv_escape(table.columns[j]);
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << csv_escape(format_cell(row[j]));
      os << '\n';
    }
  } else {
    nlohmann::ordered_json header;
    header["schema"] = kSchemaVersion;
    header["subcommand"] = prov.subcommand;
    header["seed"] = prov.seed;
    header["build"] = build_id();
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : prov.params) params[k] = v;
    header["params"] = std::move(params);
    os << header.dump() << '\n';
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t j = 0; j < row.size(); ++j) obj[table.columns[j]] = cell_json(row[j]);
      os << obj.dump() << '\n';
    }
  }
  if (!os) throw std::ios_base::failure("write failed");
}

Table bound_reports_table(const std::vector<bounds::BoundReport>& reports) {
  Table t;
  t.columns = {"bound", "regime", "n", "d", "D", "value_nats", "usable_value_nats", "usable"};
  std::vector<std::vector<std::pair<std::size_t, Cell>>> extra(reports.size());
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto& rep = reports[r];
    for (const auto& [k, v] : rep.inputs)
      if (k != "n" && k != "d" && k != "D") extra[r].emplace_back(column_index(t.columns, "input:" + k), v);
    for (const auto& term : rep.terms) extra[r].emplace_back(column_index(t.columns, "term:" + term.label), term.value_nats);
    for (const auto& a : rep.aux) extra[r].emplace_back(column_index(t.columns, "aux:" + a.label), a.value_nats);
    for (const auto& v : rep.validity) extra[r].emplace_back(column_index(t.columns, "valid:" + v.name), v.pass);
  }
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto& rep = reports[r];
    std::vector<Cell> row(t.columns.size());
    row[0] = rep.bound_name;
    row[1] = std::string(bounds::to_string(rep.regime));
    for (const auto& [k, v] : rep.inputs) {
      if (k == "n") row[2] = v;
      else if (k == "d") row[3] = v;
      else if (k == "D") row[4] = v;
    }
    row[5] = rep.value_nats;
    row[6] = rep.usable_value();
    row[7] = rep.usable();
    for (auto& [idx, cell] : extra[r]) row[idx] = std::move(cell);
    t.add_row(std::move(row));
  }
  return t;
}

Table rd_curve_table(const std::vector<oracles::RDCurvePoint>& points) {
  Table t;
  t.columns = {"slope", "rate_nats", "distortion", "iterations", "converged", "rate_lower_bound_nats",
               "duality_gap_bound"};
  for (const auto& p : points)
    t.add_row({p.slope, p.rate, p.distortion, static_cast<long long>(p.iterations), p.converged,
               p.rate_lower_bound, p.duality_gap_bound});
  return t;
}

Table suite_table(const std::vector<verify::SuiteReport>& reports) {
  Table t;
  t.columns = {"suite", "kind", "name", "trials", "violations", "worst_slack", "tolerance", "passed", "value"};
  for (const auto& rep : reports) {
    for (const auto& c : rep.checks)
      t.add_row({rep.suite, std::string("check"), c.name, static_cast<long long>(c.trials),
                 static_cast<long long>(c.violations), c.worst_slack, c.tolerance, c.passed(), Cell{}});
    for (const auto& [name, value] : rep.stats)
      t.add_row({rep.suite, std::string("stat"), name, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, value});
  }
  return t;
}

}  // namespace latentrd::io
