#include "specorder/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "specorder/errors.hpp"

namespace specorder::report {

Table::Table(std::vector<Column> columns) : columns_(std::move(columns)) {}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw ValidationError("table: row width does not match the header");
  for (std::size_t i = 0; i < row.size(); ++i) {
    const bool ok = (columns_[i].kind == Kind::integer && std::holds_alternative<long long>(row[i])) ||
                    (columns_[i].kind == Kind::real && std::holds_alternative<double>(row[i])) ||
                    (columns_[i].kind == Kind::boolean && std::holds_alternative<bool>(row[i])) ||
                    (columns_[i].kind == Kind::text && std::holds_alternative<std::string>(row[i]));
    if (!ok) throw ValidationError("table: cell type does not match column '" + columns_[i].name + "'");
  }
  rows_.push_back(std::move(row));
}

namespace {

std::string to_chars_general(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        if constexpr (std::is_same_v<T, double>) return format_real(v);
        if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        if constexpr (std::is_same_v<T, std::string>) return csv_field(v);
      },
      c);
}

Json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
        }
        return v;
      },
      c);
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else if (value.is_number_float()) {
      out << name << ": " << format_short(value.get<double>()) << "\n";
    } else if (value.is_string()) {
      out << name << ": " << value.get<std::string>() << "\n";
    } else {
      out << name << ": " << value.dump() << "\n";
    }
  }
}

}  // namespace

std::string format_real(double v) { return to_chars_general(v, 17); }
std::string format_short(double v) { return to_chars_general(v, 6); }

void write_csv(const Table& t, std::ostream& out) {
  const auto& cols = t.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(cols[i].name);
  out << "\n";
  for (const auto& row : t.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
}

Json rows_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows()) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns()[i].name] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

Json document(const Json& meta, const Table& t, const Json& summary) {
  Json doc = Json::object();
  doc["meta"] = meta;
  doc["rows"] = rows_json(t);
  if (!summary.is_null() && !summary.empty()) doc["summary"] = summary;
  return doc;
}

void write_summary(const Json& summary, std::ostream& out) { flatten(summary, "", out); }

}  // namespace specorder::report
