// table.hpp - deterministic tabular output (CSV, JSON, gnuplot columns).

#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace adlab::cli {

using Cell = std::variant<std::string, double, long long, bool>;

/// Shortest form is not used: doubles always carry 17 significant digits and
/// never depend on the locale.
std::string format_double(double v);
std::string format_cell(const Cell& c);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void write_csv(std::ostream& os) const;
  nlohmann::ordered_json rows_json() const;
  /// Whitespace-separated columns with a '#' header line; rows whose first
  /// `block_column` cell changes are separated by a blank line.
  void write_gnuplot(std::ostream& os, int block_column = -1) const;
};

nlohmann::ordered_json cell_json(const Cell& c);

}  // namespace adlab::cli
