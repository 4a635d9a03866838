#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "config.hpp"

namespace mpa::cli {

using Cell = std::variant<std::monostate, double, long, bool, std::string>;

struct Table {
  std::string name;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Metadata pairs for a table: command, table name and every resolved key.
std::vector<std::pair<std::string, std::string>> metadata_for(const RunConfig& config,
                                                              const std::string& table);

/// 17 significant digits, shortest form of "%.17g".
std::string format_number(double value);

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);

/// All tables to one stream, or one file per table under `dir`.
void emit(const std::vector<Table>& tables, Format format, std::ostream& out);
void emit_to_directory(const std::vector<Table>& tables, Format format, const std::string& dir);

}  // namespace mpa::cli
