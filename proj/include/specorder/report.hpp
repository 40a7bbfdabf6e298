#pragma once

// Tables and their machine-readable renderings. CSV carries a header row and
// prints reals with 17 significant digits; JSON wraps the same rows in one
// object next to `meta` and an optional `summary`. Both are locale-free.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace specorder::report {

using Json = nlohmann::ordered_json;
using Cell = std::variant<long long, double, bool, std::string>;

enum class Kind { integer, real, boolean, text };

struct Column {
  std::string name;
  Kind kind = Kind::real;
};

class Table {
 public:
  explicit Table(std::vector<Column> columns);

  /// Cells must match the column kinds.
  void add(std::vector<Cell> row);

  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// 17 significant digits, shortest exponent form, never locale dependent.
std::string format_real(double v);
/// 6 significant digits for human-facing summaries.
std::string format_short(double v);

void write_csv(const Table& t, std::ostream& out);
Json rows_json(const Table& t);
Json document(const Json& meta, const Table& t, const Json& summary);

/// One `key: value` line per summary entry, nested objects flattened with dots.
void write_summary(const Json& summary, std::ostream& out);

}  // namespace specorder::report
