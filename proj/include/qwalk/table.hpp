#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace qwalk {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-named rows, written as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  explicit Table(std::vector<std::string> cols = {}) : columns(std::move(cols)) {}

  /// Throws std::invalid_argument when the row width does not match.
  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;
  /// Numeric column as doubles (integers are widened).
  std::vector<double> numeric_column(const std::string& name) const;
};

/// Doubles use 17 significant digits; NaN is written as "nan" and
/// infinities as "inf" / "-inf". Strings containing a comma, quote or
/// newline are quoted.
std::string to_csv(const Table& table);
/// Non-finite doubles become null.
std::string to_json(const Table& table, int indent = 2);

std::string format_double(double value);

}  // namespace qwalk
