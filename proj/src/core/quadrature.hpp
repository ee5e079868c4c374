#ifndef FG_QUADRATURE_HPP
#define FG_QUADRATURE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>

#include "common.hpp"

namespace fg {

namespace detail {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr double kGL15Nodes[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601700,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
inline constexpr double kGL15Weights[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

inline double integrand_norm(double x) { return std::abs(x); }
template <class D>
double integrand_norm(const Eigen::MatrixBase<D>& m) {
  return m.cwiseAbs().maxCoeff();
}

inline void integrand_zero(double& x, double) { x = 0.0; }
template <class D>
void integrand_zero(Eigen::MatrixBase<D>& m, const Eigen::MatrixBase<D>& like) {
  m.derived() = D::Zero(like.rows(), like.cols());
}

}  // namespace detail

// Composite 15-point Gauss-Legendre on [0, 1) with 2^d uniform panels.
template <class F>
auto composite_unit_interval(F&& f, int doublings) {
  const std::size_t panels = std::size_t(1) << doublings;
  const double h = 1.0 / double(panels);
  auto acc = f(0.5 * h);  // shape prototype
  decltype(acc) sum = acc;
  detail::integrand_zero(sum, acc);
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = double(p) * h;
    for (int i = 0; i < 15; ++i) {
      const double u = a + 0.5 * h * (1.0 + detail::kGL15Nodes[i]);
      sum += (0.5 * h * detail::kGL15Weights[i]) * f(u);
    }
  }
  return sum;
}

// Integral over [0, inf) of f(t) via the substitution t = scale*u/(1-u).
// Panels are doubled until the relative change drops below rel_tol; a hard
// cap of 2^max_doublings panels turns non-convergence into an error.
template <class F>
auto integrate_half_line(F&& f, double scale, double rel_tol = 1e-10, int max_doublings = 14) {
  if (!(scale > 0.0)) scale = 1.0;
  auto g = [&](double u) {
    const double om = 1.0 - u;
    const double t = scale * u / om;
    return decltype(f(0.0))(f(t) * (scale / (om * om)));
  };
  auto prev = composite_unit_interval(g, 2);
  for (int d = 3; d <= max_doublings; ++d) {
    auto cur = composite_unit_interval(g, d);
    const double diff = detail::integrand_norm(decltype(cur)(cur - prev));
    const double size = detail::integrand_norm(cur);
    if (diff <= rel_tol * std::max(size, 1e-300) || (size == 0.0 && diff == 0.0)) return cur;
    prev = cur;
  }
  auto last = composite_unit_interval(g, max_doublings);
  const double achieved = detail::integrand_norm(decltype(last)(last - prev)) /
                          std::max(detail::integrand_norm(last), 1e-300);
  throw QuadratureError("improper integral did not converge to " + std::to_string(rel_tol) +
                            " (achieved " + std::to_string(achieved) + ")",
                        achieved);
}

// Same doubling scheme on a finite interval [a, b].
template <class F>
auto integrate_finite(F&& f, double a, double b, double rel_tol = 1e-10, int max_doublings = 14) {
  auto g = [&](double u) { return f(a + (b - a) * u); };
  auto scaled = [&](int d) {
    auto v = composite_unit_interval(g, d);
    return decltype(v)(v * (b - a));
  };
  auto prev = scaled(2);
  for (int d = 3; d <= max_doublings; ++d) {
    auto cur = scaled(d);
    const double diff = detail::integrand_norm(decltype(cur)(cur - prev));
    if (diff <= rel_tol * std::max(detail::integrand_norm(cur), 1e-300)) return cur;
    prev = cur;
  }
  auto last = scaled(max_doublings);
  const double achieved = detail::integrand_norm(decltype(last)(last - prev)) /
                          std::max(detail::integrand_norm(last), 1e-300);
  throw QuadratureError("finite integral did not converge to " + std::to_string(rel_tol) +
                            " (achieved " + std::to_string(achieved) + ")",
                        achieved);
}

// log(1+x) - x evaluated without catastrophic cancellation near x = 0.
inline double log1p_minus_x(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return -0.5 * x2 + x2 * x / 3.0 - 0.25 * x2 * x2;
  }
  return std::log1p(x) - x;
}

}  // namespace fg

#endif
