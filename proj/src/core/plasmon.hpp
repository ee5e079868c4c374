#ifndef FG_PLASMON_HPP
#define FG_PLASMON_HPP

#include <vector>

#include "geometry.hpp"
#include "system.hpp"

namespace fg {

// Isolated top mode of 2*Etilde_k in the unscaled regime.  epsilon is twice
// the square root of the top eigenvalue of h^2 + 2 P_{h^{1/2}v}, which is a
// diagonal-plus-rank-one problem.  The eigenvector is constant on groups of
// equal lambda, so it is stored per distinct lambda value; phi_over_lune
// expands it to the unit vector over L_k.
struct PlasmonMode {
  Momentum k;
  double epsilon = 0.0;             // top eigenvalue of 2*Etilde
  std::vector<double> group_lambda; // distinct lambda values, ascending
  std::vector<double> phi;          // eigenvector value on each group
  double phi_inf = 0.0;
  double gap_to_formula = 0.0;      // epsilon - 2 sqrt(2<v,hv> + <v,h^3 v>/<v,hv>)
  bool delocalization_ok = false;
  bool formula_region = false;      // top eigenvalue exceeds lambda_max^2 + 1e-9
  bool degenerate = false;          // top eigenvalue within 1e-9 rel of the second
  double closed_form_deviation = 0.0;  // max-norm gap to the eigenvector formula
  double eigen_residual = 0.0;      // |(h^2+2P_w)phi - (eps/2)^2 phi| / (eps/2)^2
  std::int64_t lune_size = 0;
  double lambda_max = 0.0;
  double vhv = 0.0;                 // <v, h v>
  double vh3v = 0.0;                // <v, h^3 v>

  std::vector<double> phi_over_lune(const Lune& lune) const;
  double phi_at_lambda(double lambda) const;
};

PlasmonMode compute_mode(const FermiSystem& system, const Momentum& k);

struct ModeThreshold {
  double lhs = 0.0;  // 2 <v, h v>
  double rhs = 0.0;  // lambda_max^2
  bool satisfied = false;
};
ModeThreshold mode_threshold(const FermiSystem& system, const Momentum& k);

struct DispersionRow {
  std::int64_t kf2 = 0;
  Momentum k;
  double epsilon = 0.0;
  double predicted = 0.0;  // sqrt(2 g n + (12/5) kF^2 |k|^2)
  double deviation = 0.0;  // relative
  bool formula_region = false;
};

// Coulomb dispersion table: rows ordered by (kf2, |k|^2, lex k).
std::vector<DispersionRow> dispersion_table(double g, int s,
                                            const std::vector<std::int64_t>& kf2_list,
                                            const std::vector<Momentum>& k_list, int jobs = 1);

}  // namespace fg

#endif
