#include "riemann.hpp"

#include <cmath>

#include "quadrature.hpp"

namespace fg {

PowerSumResult power_sum(const Lune& lune, double beta) {
  if (lune.size() == 0) throw ConfigError("power_sum requires a non-empty lune");
  PowerSumResult out;
  out.beta = beta;
  out.lune_size = std::int64_t(lune.size());
  double acc = 0.0;
  for (std::int64_t tl : lune.twice_lambda) acc += std::pow(0.5 * double(tl), beta);
  out.value = acc;
  return out;
}

double power_sum(const std::vector<std::pair<std::int64_t, std::int64_t>>& hist, double beta) {
  double acc = 0.0;
  for (const auto& [tl, count] : hist) acc += double(count) * std::pow(0.5 * double(tl), beta);
  return acc;
}

std::vector<AsymptoticCheck> check_minus_one_asymptotics(const std::vector<std::int64_t>& kf2_list,
                                                         const Momentum& k) {
  std::vector<AsymptoticCheck> out;
  for (std::int64_t kf2 : kf2_list) {
    const FermiBall ball = enumerate_fermi_ball(kf2);
    const auto hist = lambda_histogram(ball, k);
    AsymptoticCheck chk;
    chk.kf2 = kf2;
    chk.computed = power_sum(hist, -1.0);
    chk.predicted = kTwoPi * std::sqrt(double(kf2));
    chk.relative_error =
        std::abs(chk.computed - chk.predicted) / std::max(std::abs(chk.predicted), 1e-300);
    chk.regime = k.norm2() < 4 * kf2 ? Regime::BelowTwoKf : Regime::AboveTwoKf;
    out.push_back(chk);
  }
  return out;
}

BoundCheck check_bounds(const Lune& lune, double beta) {
  BoundCheck out;
  out.beta = beta;
  out.upper_form = beta >= -1.0 && beta <= 0.0;
  out.lower_form = beta == 0.0 || beta >= 1.0;
  if (!out.upper_form && !out.lower_form)
    throw ConfigError("beta = " + std::to_string(beta) +
                      " outside [-1,0] and {0} u [1,inf); no bound family applies");
  const double sum = power_sum(lune, beta).value;
  const double kf = std::sqrt(double(lune.kf2));
  const double kn = std::sqrt(double(lune.k.norm2()));
  out.regime = lune.k.norm2() < 4 * lune.kf2 ? Regime::BelowTwoKf : Regime::AboveTwoKf;
  const double denom = out.regime == Regime::BelowTwoKf
                           ? std::pow(kf, 2.0 + beta) * std::pow(kn, 1.0 + beta)
                           : std::pow(kf, 3.0) * std::pow(kn, 2.0 * beta);
  out.ratio = sum / denom;
  return out;
}

double slice_summation(const Lune& lune, const std::function<double(double)>& f) {
  const std::int64_t g = gcd3(lune.k);
  const std::int64_t k2 = lune.k.norm2();
  double acc = 0.0;
  for (const LuneSlice& slice : lune_slices(lune)) {
    // |k|(l m - |k|/2) = g m - |k|^2/2, the common lambda value of the slice
    const double lam = 0.5 * double(2 * g * slice.m - k2);
    acc += f(lam) * double(slice.points.size());
  }
  return acc;
}

double continuum_integral(double kf, double k_norm, double beta) {
  if (!(k_norm > 0.0)) throw ConfigError("continuum integral requires |k| > 0");
  if (k_norm >= 2.0 * kf)
    throw ConfigError("continuum integral formula requires |k| < 2 kF (got |k| = " +
                      std::to_string(k_norm) + ", kF = " + std::to_string(kf) + ")");
  const double a = kf - 0.5 * k_norm;        // annulus piece, in s = t - |k|/2
  const double b = kf + 0.5 * k_norm;        // cap piece upper end
  const double c0 = kf * kf - 0.25 * k_norm * k_norm;
  const double pi = 3.141592653589793;

  // first piece has a closed form for every beta > -2
  const double piece1 =
      2.0 * pi * std::pow(k_norm, 1.0 + beta) * std::pow(a, 2.0 + beta) / (2.0 + beta);

  const bool closed = beta == 0.0 || beta == 1.0 || beta == 3.0;
  double piece2;
  if (closed) {
    auto moment = [&](double e) { return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0); };
    piece2 = pi * std::pow(k_norm, beta) *
             (c0 * moment(beta) + k_norm * moment(beta + 1.0) - moment(beta + 2.0));
  } else {
    auto f = [&](double s) { return std::pow(s, beta) * (c0 + k_norm * s - s * s); };
    piece2 = pi * std::pow(k_norm, beta) * integrate_finite(f, a, b, 1e-10);
  }
  return piece1 + piece2;
}

}  // namespace fg
