#pragma once

// Row-oriented string tables rendered as aligned text, CSV or JSON, and a
// reader for two-column (index, value) sequence files. All output uses LF
// line endings.

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pmh/errors.hpp"
#include "pmh/measures_io.hpp"
#include "pmh/rational.hpp"

namespace pmh {

enum class Format { Table, Csv, Json };

inline Format parse_format(std::string_view name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ParseError("unknown format '" + std::string(name) + "' (expected table, csv or json)");
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;  // written as "# ..." lines before the header

  explicit Table(std::vector<std::string> names = {}) : columns(std::move(names)) {}

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
    rows.push_back(std::move(row));
  }

  const std::string& at(std::size_t row, std::string_view column) const {
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end()) throw std::out_of_range("no column " + std::string(column));
    return rows.at(row)[static_cast<std::size_t>(it - columns.begin())];
  }
};

namespace detail {

inline std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv_line(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Table& table) {
  for (const auto& c : table.comments) os << "# " << c << '\n';
  detail::write_csv_line(os, table.columns);
  for (const auto& row : table.rows) detail::write_csv_line(os, row);
}

inline void write_aligned(std::ostream& os, const Table& table) {
  std::vector<std::size_t> width(table.columns.size());
  for (std::size_t j = 0; j < width.size(); ++j) {
    width[j] = table.columns[j].size();
    for (const auto& row : table.rows) width[j] = std::max(width[j], row[j].size());
  }
  auto line = [&](const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j > 0) out += "  ";
      out += std::string(width[j] - fields[j].size(), ' ') + fields[j];
    }
    os << out << '\n';
  };
  for (const auto& c : table.comments) os << "# " << c << '\n';
  line(table.columns);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& row : table.rows) line(row);
}

// {"comments": [...], "rows": [{"col": "value", ...}, ...]}; every value
// stays a string so exact rationals survive.
inline nlohmann::ordered_json table_to_json(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) obj[table.columns[j]] = row[j];
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  if (!table.comments.empty()) out["comments"] = table.comments;
  out["columns"] = table.columns;
  out["rows"] = std::move(rows);
  return out;
}

inline void write_table(std::ostream& os, const Table& table, Format format) {
  switch (format) {
    case Format::Table:
      write_aligned(os, table);
      break;
    case Format::Csv:
      write_csv(os, table);
      break;
    case Format::Json:
      os << table_to_json(table).dump(2) << '\n';
      break;
  }
}

// Reads "index,value" lines. Blank lines and '#' comments are skipped, a
// non-numeric first line is taken as a header, and indices must run
// 0, 1, 2, ... in order.
template <Scalar T>
std::vector<T> read_sequence(std::istream& is) {
  std::vector<T> values;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'index,value'");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string index_text = trim(line.substr(0, comma));
    const std::string value_text = trim(line.substr(comma + 1));
    const bool numeric_index =
        !index_text.empty() && std::all_of(index_text.begin(), index_text.end(),
                                           [](unsigned char c) { return std::isdigit(c) != 0; });
    if (first && !numeric_index) {
      first = false;
      continue;
    }
    first = false;
    if (!numeric_index || std::stoull(index_text) != values.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": indices must run 0, 1, 2, ...");
    }
    values.push_back(scalar_from_text<T>(value_text));
  }
  if (values.empty()) throw ParseError("sequence input is empty");
  return values;
}

// Exact values as lossless decimal or "p/q"; doubles to 12 significant digits.
inline std::string cell(const Rational& r) { return to_exact_string(r); }
inline std::string cell(double x) { return format_sig(x); }

template <Scalar T>
Table sequence_table(const std::vector<T>& values, const std::string& value_name = "value") {
  Table t({"index", value_name});
  for (std::size_t i = 0; i < values.size(); ++i) t.add_row({std::to_string(i), cell(values[i])});
  return t;
}

}  // namespace pmh
