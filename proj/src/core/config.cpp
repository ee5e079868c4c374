#include "config.hpp"

#include <set>

namespace fg {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

Momentum parse_momentum(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number_integer())
    throw ConfigError(where + " must be an integer triple [x,y,z]");
  return Momentum{j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

Potential parse_potential(const json& j) {
  if (!j.is_object()) throw ConfigError("potential must be an object");
  const std::string type = j.value("type", "zero");
  if (type == "zero") {
    reject_unknown(j, {"type"}, "potential");
    return Potential::zero();
  }
  if (type == "coulomb") {
    reject_unknown(j, {"type", "g"}, "potential");
    if (!j.contains("g")) throw ConfigError("coulomb potential requires \"g\"");
    return Potential::coulomb(j["g"].get<double>());
  }
  if (type == "gaussian") {
    reject_unknown(j, {"type", "a", "b"}, "potential");
    if (!j.contains("a") || !j.contains("b"))
      throw ConfigError("gaussian potential requires \"a\" and \"b\"");
    return Potential::gaussian(j["a"].get<double>(), j["b"].get<double>());
  }
  if (type == "table") {
    reject_unknown(j, {"type", "entries"}, "potential");
    if (!j.contains("entries") || !j["entries"].is_array())
      throw ConfigError("table potential requires an \"entries\" array");
    std::map<Momentum, double> entries;
    for (const json& e : j["entries"]) {
      reject_unknown(e, {"k", "v"}, "potential entry");
      entries[parse_momentum(e.at("k"), "potential entry k")] = e.at("v").get<double>();
    }
    return Potential::from_table(entries);
  }
  throw ConfigError("unknown potential type \"" + type + "\"");
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"system", "kf2_list", "k_list", "beta_list", "cutoff", "ex_cutoff", "jobs",
                  "format", "out", "quad_rel_tol", "epsilon", "only", "fault"},
                 "config");
  RunConfig cfg;

  if (doc.contains("system")) {
    const json& s = doc["system"];
    reject_unknown(s, {"kf2", "s", "mean_field", "v0", "potential"}, "system");
    if (s.contains("kf2")) cfg.system.kf2 = s["kf2"].get<std::int64_t>();
    if (s.contains("s")) cfg.system.s = s["s"].get<int>();
    if (s.contains("mean_field")) cfg.system.mean_field = s["mean_field"].get<bool>();
    if (s.contains("v0")) cfg.system.v0hat = s["v0"].get<double>();
    if (s.contains("potential")) cfg.system.potential = parse_potential(s["potential"]);
  }
  cfg.system.validate();

  // explicitly empty lists stay empty (an empty sweep is a valid request);
  // absent keys get the defaults
  if (doc.contains("kf2_list"))
    for (const json& v : doc["kf2_list"]) cfg.kf2_list.push_back(v.get<std::int64_t>());
  else
    cfg.kf2_list.push_back(cfg.system.kf2);
  for (std::int64_t v : cfg.kf2_list)
    if (v < 1) throw ConfigError("kf2_list entries must be >= 1");

  if (doc.contains("k_list"))
    for (const json& v : doc["k_list"]) cfg.k_list.push_back(parse_momentum(v, "k_list entry"));
  else
    cfg.k_list.push_back({1, 0, 0});

  if (doc.contains("beta_list")) {
    cfg.beta_list.clear();
    for (const json& v : doc["beta_list"]) cfg.beta_list.push_back(v.get<double>());
  } else {
    cfg.beta_list = {0.0, 1.0, -1.0};
  }

  if (doc.contains("cutoff")) cfg.cutoff = doc["cutoff"].get<int>();
  if (doc.contains("ex_cutoff")) cfg.ex_cutoff = doc["ex_cutoff"].get<int>();
  if (doc.contains("jobs")) cfg.jobs = doc["jobs"].get<int>();
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format must be \"csv\" or \"json\"");
  if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
  if (doc.contains("quad_rel_tol")) cfg.quad_rel_tol = doc["quad_rel_tol"].get<double>();
  if (doc.contains("epsilon")) cfg.epsilon = doc["epsilon"].get<double>();
  if (doc.contains("only")) cfg.only = doc["only"].get<std::string>();
  if (doc.contains("fault")) cfg.fault = doc["fault"].get<std::string>();

  cfg.echo = doc;
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace fg
