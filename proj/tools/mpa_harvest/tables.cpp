#include "tables.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace mpa::cli {
namespace {

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) return "";
        else if constexpr (std::is_same_v<V, double>) return format_number(v);
        else if constexpr (std::is_same_v<V, long>) return std::to_string(v);
        else if constexpr (std::is_same_v<V, bool>) return v ? "true" : "false";
        else return v;
      },
      cell);
}

nlohmann::ordered_json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<V, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else return v;
      },
      cell);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row width does not match table '" + name + "'");
  }
  rows.push_back(std::move(row));
}

std::vector<std::pair<std::string, std::string>> metadata_for(const RunConfig& config,
                                                              const std::string& table) {
  std::vector<std::pair<std::string, std::string>> meta{{"command", config.command},
                                                        {"table", table}};
  for (const auto& key : config_keys()) meta.emplace_back(key, config.resolved.at(key));
  return meta;
}

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

void write_csv(std::ostream& out, const Table& table) {
  out << '#';
  for (const auto& [k, v] : table.metadata) out << ' ' << k << '=' << v;
  out << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_cell(row[i]);
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.metadata) doc["metadata"][k] = v;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(json_cell(cell));
    doc["rows"].push_back(std::move(r));
  }
  out << doc.dump(1) << '\n';
}

void emit(const std::vector<Table>& tables, Format format, std::ostream& out) {
  if (format == Format::Json) {
    out << "[\n";
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (i) out << ",\n";
      write_json(out, tables[i]);
    }
    out << "]\n";
    return;
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) out << '\n';
    write_csv(out, tables[i]);
  }
}

void emit_to_directory(const std::vector<Table>& tables, Format format, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& table : tables) {
    const auto path = std::filesystem::path(dir) / (table.name + (format == Format::Json ? ".json" : ".csv"));
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    if (format == Format::Json) write_json(file, table);
    else write_csv(file, table);
  }
}

}  // namespace mpa::cli
