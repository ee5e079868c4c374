#include "table.hpp"

#include <cstdio>
#include <json.hpp>

namespace fg {

void ResultTable::add_row(std::vector<Cell> cells) {
  if (cells.size() != columns.size())
    throw Error("row width " + std::to_string(cells.size()) + " does not match " +
                std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(cells));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", x);
  return buf;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  return std::get<std::string>(c);
}

}  // namespace

std::string render_csv(const ResultTable& table) {
  std::string out;
  out += "# config " + table.config_echo + "\n";
  out += "# version " + table.version + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_quote(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_quote(cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const ResultTable& table) {
  nlohmann::json j;
  j["meta"]["config"] = nlohmann::json::parse(table.config_echo);
  j["meta"]["version"] = table.version;
  j["columns"] = table.columns;
  nlohmann::json values = nlohmann::json::object();
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    nlohmann::json col = nlohmann::json::array();
    for (const auto& row : table.rows) {
      const Cell& cell = row[c];
      if (std::holds_alternative<std::int64_t>(cell))
        col.push_back(std::get<std::int64_t>(cell));
      else if (std::holds_alternative<double>(cell))
        col.push_back(std::get<double>(cell));
      else
        col.push_back(std::get<std::string>(cell));
    }
    values[table.columns[c]] = std::move(col);
  }
  j["values"] = std::move(values);
  return j.dump(2) + "\n";
}

}  // namespace fg
