#ifndef FG_TABLE_HPP
#define FG_TABLE_HPP

#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "common.hpp"

namespace fg {

using Cell = std::variant<std::int64_t, double, std::string>;

// Column-ordered result table with a config echo.  Rendering is fully
// deterministic: fixed row order, %.12e floats, '.' decimal separator.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string config_echo;  // resolved config as canonical JSON text
  std::string version;

  void add_row(std::vector<Cell> cells);
};

std::string render_csv(const ResultTable& table);
std::string render_json(const ResultTable& table);

std::string format_double(double x);

}  // namespace fg

#endif
