#ifndef FG_RIEMANN_HPP
#define FG_RIEMANN_HPP

#include <functional>
#include <vector>

#include "geometry.hpp"

namespace fg {

struct PowerSumResult {
  double beta = 0.0;
  double value = 0.0;
  std::int64_t lune_size = 0;
};

// Sum over the lune of lambda^beta, from the stored exact 2*lambda values.
PowerSumResult power_sum(const Lune& lune, double beta);
// Same from an aggregated (2*lambda, count) histogram.
double power_sum(const std::vector<std::pair<std::int64_t, std::int64_t>>& hist, double beta);

enum class Regime { BelowTwoKf, AboveTwoKf };

struct AsymptoticCheck {
  std::int64_t kf2 = 0;
  double computed = 0.0;
  double predicted = 0.0;  // 2*pi*k_F
  double relative_error = 0.0;
  Regime regime = Regime::BelowTwoKf;
};

std::vector<AsymptoticCheck> check_minus_one_asymptotics(const std::vector<std::int64_t>& kf2_list,
                                                         const Momentum& k);

struct BoundCheck {
  double beta = 0.0;
  double ratio = 0.0;      // sum / (kF^{2+b}|k|^{1+b}), or / (kF^3 |k|^{2b}) above 2kF
  Regime regime = Regime::BelowTwoKf;
  bool upper_form = false;  // beta in [-1, 0]
  bool lower_form = false;  // beta in {0} or [1, inf)
};

// Errors when beta lies outside [-1,0] and [1,inf) (neither bound family).
BoundCheck check_bounds(const Lune& lune, double beta);

// Exact slice summation: sum_m f(|k|(lm - |k|/2)) |L_k^m|. The argument
// equals lambda on the slice, so this matches the direct sum to rounding.
double slice_summation(const Lune& lune, const std::function<double(double)>& f);

// Continuum counterpart of the lune sum: closed forms for beta in {0, 1, 3},
// adaptive quadrature otherwise.  Requires 0 < k_norm < 2 kF.
double continuum_integral(double kf, double k_norm, double beta);

}  // namespace fg

#endif
