#include "operators.hpp"

#include <cmath>

#include "quadrature.hpp"

namespace fg {

Matrix sym_func(const Matrix& a, const std::function<double(double)>& f, const std::string& fname) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(a));
  if (es.info() != Eigen::Success) throw Error("symmetric eigendecomposition failed");
  Vector vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double fx = f(vals[i]);
    if (!std::isfinite(fx))
      throw Error(fname + " undefined at eigenvalue " + std::to_string(vals[i]));
    vals[i] = fx;
  }
  return symmetrized(es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose());
}

Matrix sym_sqrt(const Matrix& a) {
  return sym_func(
      a, [](double x) { return x < 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(x); },
      "sqrt");
}

Matrix sym_log(const Matrix& a) {
  return sym_func(
      a, [](double x) { return x <= 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::log(x); },
      "log");
}

Matrix sym_exp(const Matrix& a) {
  return sym_func(a, [](double x) { return std::exp(x); }, "exp");
}

Matrix sym_inv_sqrt(const Matrix& a) {
  return sym_func(
      a,
      [](double x) {
        return x <= 0.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0 / std::sqrt(x);
      },
      "1/sqrt");
}

Matrix sherman_morrison(const Matrix& a_inv, double g, const Vector& w) {
  const Vector aw = a_inv * w;
  const double denom = 1.0 + g * w.dot(aw);
  if (std::abs(denom) <= 1e-12)
    throw Error("Sherman-Morrison update is singular: 1 + g<w,A^-1 w> = " + std::to_string(denom));
  return Matrix(a_inv - (g / denom) * (aw * aw.transpose()));
}

Matrix rank_one_sqrt(const Matrix& a, double g, const Vector& w, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(a));
  if (es.info() != Eigen::Success) throw Error("symmetric eigendecomposition failed");
  const Vector lam = es.eigenvalues();
  const Matrix q = es.eigenvectors();
  const Vector wt = q.transpose() * w;

  {
    Matrix perturbed = symmetrized(a) + g * (w * w.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> ps(perturbed);
    if (ps.eigenvalues().minCoeff() <= 0.0)
      throw Error("A + g P_w is not positive definite (min eigenvalue " +
                  std::to_string(ps.eigenvalues().minCoeff()) + ")");
  }

  const Eigen::Index n = lam.size();
  const double scale = std::sqrt(std::max(lam.maxCoeff(), 1e-12));
  auto integrand = [&](double t) {
    Vector y(n);
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      y[i] = wt[i] / (lam[i] + t * t);
      s += wt[i] * y[i];
    }
    const double c = t * t / (1.0 + g * s);
    return Matrix(c * (y * y.transpose()));
  };
  const Matrix integral = integrate_half_line(integrand, scale, rel_tol);

  Vector root(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam[i] < 0.0) throw Error("sqrt undefined at eigenvalue " + std::to_string(lam[i]));
    root[i] = std::sqrt(lam[i]);
  }
  Matrix result = Matrix(root.asDiagonal()) + (2.0 * g / 3.141592653589793) * integral;
  return symmetrized(q * result * q.transpose());
}

double rank_one_sqrt_trace_increment(const Matrix& a, double g, const Vector& w, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(a));
  const Vector lam = es.eigenvalues();
  const Vector wt = es.eigenvectors().transpose() * w;
  const double scale = std::sqrt(std::max(lam.maxCoeff(), 1e-12));
  auto integrand = [&](double t) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) s += wt[i] * wt[i] / (lam[i] + t * t);
    return std::log1p(g * s);
  };
  return integrate_half_line(integrand, scale, rel_tol) / 3.141592653589793;
}

}  // namespace fg
