#include "system.hpp"

#include <algorithm>
#include <cmath>

namespace fg {

Potential Potential::coulomb(double g) {
  Potential p;
  p.kind = Kind::Coulomb;
  p.g = g;
  return p;
}

Potential Potential::gaussian(double a, double b) {
  Potential p;
  p.kind = Kind::Gaussian;
  p.a = a;
  p.b = b;
  return p;
}

Potential Potential::from_table(const std::map<Momentum, double>& entries) {
  Potential p;
  p.kind = Kind::Table;
  for (const auto& [k, v] : entries) {
    if (!std::isfinite(v)) throw ConfigError("table potential entry for " + to_string(k) + " is not finite");
    auto it = p.table.find(k);
    if (it != p.table.end() && it->second != v)
      throw ConfigError("table potential violates V_k = V_{-k} at " + to_string(k));
    p.table[k] = v;
    p.table[-k] = v;
  }
  return p;
}

double Potential::operator()(const Momentum& k) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Coulomb:
      return k.is_zero() ? 0.0 : g / double(k.norm2());
    case Kind::Gaussian:
      return a * std::exp(-b * double(k.norm2()));
    case Kind::Table: {
      auto it = table.find(k);
      return it == table.end() ? 0.0 : it->second;
    }
  }
  return 0.0;
}

int Potential::support_radius() const {
  if (kind != Kind::Table) return 0;
  std::int64_t r2 = 0;
  for (const auto& [k, v] : table)
    if (v != 0.0) r2 = std::max(r2, k.norm2());
  return int(std::ceil(std::sqrt(double(r2))));
}

std::string Potential::describe() const {
  switch (kind) {
    case Kind::Zero:
      return "zero";
    case Kind::Coulomb:
      return "coulomb(g=" + std::to_string(g) + ")";
    case Kind::Gaussian:
      return "gaussian(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")";
    case Kind::Table:
      return "table(" + std::to_string(table.size()) + " entries)";
  }
  return "?";
}

void FermiSystem::validate() const {
  if (kf2 < 1) throw ConfigError("kf2 must be >= 1");
  if (s < 1) throw ConfigError("spin count s must be >= 1");
  if (!std::isfinite(v0hat)) throw ConfigError("V_0 must be finite");
}

}  // namespace fg
