#ifndef FG_CONFIG_HPP
#define FG_CONFIG_HPP

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "system.hpp"

namespace fg {

// One JSON document drives every command; CLI flags are merged in before
// parsing.  Unknown keys are rejected at every level.
struct RunConfig {
  FermiSystem system;
  std::vector<std::int64_t> kf2_list;  // defaults to {system.kf2}
  std::vector<Momentum> k_list;        // defaults to {(1,0,0)}
  std::vector<double> beta_list;       // defaults to {0, 1, -1}
  std::optional<int> cutoff;
  std::optional<int> ex_cutoff;
  int jobs = 1;
  std::string format = "csv";  // "csv" or "json"
  std::string out;             // empty = stdout
  double quad_rel_tol = 1e-10;
  double epsilon = 0.5;        // attractive sweep parameter
  std::string only;            // verify filter
  std::string fault;           // verify fault injection
  nlohmann::json echo;         // fully resolved document

  std::string echo_text() const { return echo.dump(); }
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);

inline const char* kToolVersion = "fermigas 0.1.0";

}  // namespace fg

#endif
