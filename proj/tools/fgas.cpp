// fgas: command-line front end over the fermigas C API.
//
// Exit codes: 0 success, 1 verification failure, 2 config error,
// 3 inadmissible attractive mode.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "fermigas.h"

namespace {

struct Flags {
  std::string config_path;
  std::string out;
  std::string format;
  std::string kf2_list;
  std::string k_list;
  std::string only;
  std::string fault;
  std::optional<int> jobs;
  std::optional<int> cutoff;
};

nlohmann::json parse_kf2_list(const std::string& text) {
  nlohmann::json arr = nlohmann::json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) arr.push_back(std::stoll(item));
  return arr;
}

// triples separated by ';', components by ',': "1,0,0;2,1,0"
nlohmann::json parse_k_list(const std::string& text) {
  nlohmann::json arr = nlohmann::json::array();
  std::stringstream ss(text);
  std::string triple;
  while (std::getline(ss, triple, ';')) {
    if (triple.empty()) continue;
    nlohmann::json k = nlohmann::json::array();
    std::stringstream ts(triple);
    std::string comp;
    while (std::getline(ts, comp, ',')) k.push_back(std::stoi(comp));
    if (k.size() != 3) throw std::runtime_error("--k entries must be integer triples");
    arr.push_back(k);
  }
  return arr;
}

// Flags override config-file fields.
std::string resolve_config(const Flags& flags) {
  nlohmann::json doc = nlohmann::json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::runtime_error("cannot open config file " + flags.config_path);
    in >> doc;
  }
  if (!flags.format.empty())
    doc["format"] = flags.format;
  else if (!doc.contains("format") && !flags.out.empty()) {
    // format follows the output extension when not given explicitly
    if (flags.out.size() > 5 && flags.out.substr(flags.out.size() - 5) == ".json")
      doc["format"] = "json";
    else if (flags.out.size() > 4 && flags.out.substr(flags.out.size() - 4) == ".csv")
      doc["format"] = "csv";
  }
  if (!flags.kf2_list.empty()) doc["kf2_list"] = parse_kf2_list(flags.kf2_list);
  if (!flags.k_list.empty()) doc["k_list"] = parse_k_list(flags.k_list);
  if (flags.jobs) doc["jobs"] = *flags.jobs;
  if (flags.cutoff) doc["cutoff"] = *flags.cutoff;
  if (!flags.only.empty()) doc["only"] = flags.only;
  if (!flags.fault.empty()) doc["fault"] = flags.fault;
  return doc.dump();
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

int status_to_exit(fg_status status) {
  switch (status) {
    case FG_OK:
      return 0;
    case FG_ERR_INADMISSIBLE:
      return 3;
    case FG_ERR_CONFIG:
      return 2;
    default:
      return 2;
  }
}

int run_table(fg_status (*cmd)(const char*, char**), const Flags& flags) {
  std::string config;
  try {
    config = resolve_config(flags);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  char* out = nullptr;
  const fg_status status = cmd(config.c_str(), &out);
  if (status != FG_OK) {
    std::cerr << "error: " << fg_last_error() << "\n";
    return status_to_exit(status);
  }
  const int rc = emit(out, flags.out);
  fg_string_free(out);
  return rc;
}

int run_verify(const Flags& flags) {
  std::string config;
  try {
    config = resolve_config(flags);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  char* report = nullptr;
  int all_passed = 0;
  const fg_status status = fg_cmd_verify(config.c_str(), &report, &all_passed);
  if (status != FG_OK) {
    std::cerr << "error: " << fg_last_error() << "\n";
    return status_to_exit(status);
  }
  const int rc = emit(report, flags.out);
  fg_string_free(report);
  if (rc != 0) return rc;
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermigas numerical toolkit"};
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--config", flags.config_path, "run-config JSON file");
  app.add_option("--out", flags.out, "output path (default stdout)");
  app.add_option("--format", flags.format, "csv or json");
  app.add_option("--jobs", flags.jobs, "worker threads");
  app.add_option("--kf2", flags.kf2_list, "comma-separated kf2 values");
  app.add_option("--k", flags.k_list, "semicolon-separated momentum triples, e.g. 1,0,0;2,0,0");
  app.add_option("--cutoff", flags.cutoff, "momentum cutoff for sweeps");
  app.add_option("--only", flags.only, "verify: run suites with this prefix");
  app.add_option("--fault", flags.fault, "verify: inject a named fault");

  auto* lune = app.add_subcommand("lune", "lune sizes, lambda ranges and slice counts");
  auto* riemann = app.add_subcommand("riemann", "power sums, bounds and asymptotics");
  auto* corr = app.add_subcommand("corr", "Fermi-state and correlation energies");
  auto* plasmon = app.add_subcommand("plasmon", "plasmon dispersion table");
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  for (CLI::App* sub : {lune, riemann, corr, plasmon, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (lune->parsed()) return run_table(fg_cmd_lune, flags);
  if (riemann->parsed()) return run_table(fg_cmd_riemann, flags);
  if (corr->parsed()) return run_table(fg_cmd_corr, flags);
  if (plasmon->parsed()) return run_table(fg_cmd_plasmon, flags);
  if (verify->parsed()) return run_verify(flags);
  return 2;
}
