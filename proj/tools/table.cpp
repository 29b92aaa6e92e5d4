#include "table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <system_error>

namespace adlab::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(double d) const { return d; }
    nlohmann::ordered_json operator()(long long i) const { return i; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
  };
  return std::visit(Visitor{}, c);
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

nlohmann::ordered_json Table::rows_json() const {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

void Table::write_gnuplot(std::ostream& os, int block_column) const {
  os << "#";
  for (const auto& c : columns) os << ' ' << c;
  os << '\n';
  std::string last;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (block_column >= 0) {
      const auto key = format_cell(rows[r][static_cast<std::size_t>(block_column)]);
      if (r > 0 && key != last) os << "\n\n";
      last = key;
    }
    for (std::size_t i = 0; i < rows[r].size(); ++i) os << (i ? " " : "") << format_cell(rows[r][i]);
    os << '\n';
  }
}

}  // namespace adlab::cli
