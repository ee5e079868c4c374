#ifndef FG_SYSTEM_HPP
#define FG_SYSTEM_HPP

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "geometry.hpp"

namespace fg {

// Fourier coefficients V-hat_k of the interaction.  Symmetry V_k = V_{-k} is
// guaranteed by construction (analytic forms are radial, table entries are
// stored with both signs).
struct Potential {
  enum class Kind { Zero, Coulomb, Gaussian, Table };
  Kind kind = Kind::Zero;
  double g = 0.0;            // Coulomb: V_k = g/|k|^2
  double a = 0.0, b = 0.0;   // Gaussian: V_k = a*exp(-b|k|^2)
  std::map<Momentum, double> table;

  static Potential zero() { return {}; }
  static Potential coulomb(double g);
  static Potential gaussian(double a, double b);
  static Potential from_table(const std::map<Momentum, double>& entries);

  double operator()(const Momentum& k) const;
  // 0 for analytic potentials (unbounded support handled by the caller's
  // cutoff), max |k| of the table otherwise.
  int support_radius() const;
  std::string describe() const;
};

struct FermiSystem {
  std::int64_t kf2 = 1;     // exact k_F^2
  int s = 1;                // spin states
  Potential potential;
  bool mean_field = true;   // apply the k_F^{-1} scaling of the interaction
  double v0hat = 0.0;       // V-hat_0, default 0 (background subtracted)

  double kf() const { return std::sqrt(double(kf2)); }
  double vhat(const Momentum& k) const { return potential(k); }
  // k_F^{-1} in the mean-field regime, 1 otherwise
  double coupling_scale() const { return mean_field ? 1.0 / kf() : 1.0; }
  // v0^2 = s|V_k|c/(2(2pi)^3): the squared entry of the uniform vector v_k
  double v_entry_sq(const Momentum& k) const {
    return s * std::abs(vhat(k)) * coupling_scale() / (2.0 * kTwoPiCubed);
  }
  void validate() const;
};

}  // namespace fg

#endif
