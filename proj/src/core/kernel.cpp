#include "kernel.hpp"

#include <algorithm>
#include <cmath>

#include "quadrature.hpp"

namespace fg {

namespace {

// Shared tail of bundle construction once lambda, v, sign are fixed.
void finish_bundle(KernelBundle& b, const BuildOptions& opts) {
  const Eigen::Index n = b.lambda.size();
  b.vhinv = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) b.vhinv += b.v[i] * b.v[i] / b.lambda[i];
  b.admissibility_margin = 1.0 - 2.0 * b.vhinv;
  if (b.sign < 0 && b.admissibility_margin <= 1e-12) {
    b.admissible = false;
    throw AdmissibilityError("attractive mode inadmissible: 1 - 2<v,h^-1 v> = " +
                                 std::to_string(b.admissibility_margin),
                             b.admissibility_margin);
  }
  b.admissible = true;

  const Vector sqrt_lam = b.lambda.cwiseSqrt();
  const Vector inv_sqrt_lam = sqrt_lam.cwiseInverse();
  // h^{1/2}(h + 2P)h^{1/2} = h^2 + 2 sign P_{h^{1/2}v}
  const Vector hv = sqrt_lam.cwiseProduct(b.v);
  Matrix inner = Matrix(b.lambda.cwiseProduct(b.lambda).asDiagonal());
  if (b.sign != 0) inner += 2.0 * double(b.sign) * (hv * hv.transpose());
  b.Etilde = sym_sqrt(inner);

  Matrix w = inv_sqrt_lam.asDiagonal() * b.Etilde * inv_sqrt_lam.asDiagonal();
  b.K = -0.5 * sym_log(symmetrized(w));
  if (opts.flip_kernel_sign) b.K = -b.K;

  b.expK = sym_exp(b.K);
  b.expmK = sym_exp(Matrix(-b.K));
  b.E = symmetrized(b.expmK * b.lambda.asDiagonal() * b.expmK);

  const Matrix em2k = symmetrized(b.expmK * b.expmK);
  const Matrix half = sym_sqrt(symmetrized(sqrt_lam.asDiagonal() * em2k * sqrt_lam.asDiagonal()));
  b.U = half * inv_sqrt_lam.asDiagonal() * b.expK;
}

}  // namespace

KernelBundle build_kernel_bundle(const FermiSystem& system, const Momentum& k,
                                 const BuildOptions& opts) {
  system.validate();
  if (k.is_zero()) throw ConfigError("kernel bundle is undefined for k = 0");
  KernelBundle b;
  b.k = k;
  b.lune = enumerate_lune(system.kf2, k);
  if (b.lune.size() == 0) throw Error("empty lune for k = " + to_string(k));
  b.vhat = system.vhat(k);
  if (!std::isfinite(b.vhat)) throw ConfigError("V_k not finite at k = " + to_string(k));
  b.sign = b.vhat > 0.0 ? 1 : (b.vhat < 0.0 ? -1 : 0);

  const Eigen::Index n = Eigen::Index(b.lune.size());
  b.lambda.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) b.lambda[i] = b.lune.lambda(std::size_t(i));
  b.v = Vector::Constant(n, std::sqrt(system.v_entry_sq(k)));

  finish_bundle(b, opts);
  return b;
}

KernelBundle build_kernel_bundle_raw(const Vector& lambda, const Vector& v, int sign,
                                     const BuildOptions& opts) {
  if (lambda.size() == 0 || lambda.size() != v.size())
    throw ConfigError("lambda and v must be non-empty and of equal size");
  if (lambda.minCoeff() <= 0.0) throw ConfigError("h must be positive");
  if (v.minCoeff() < 0.0) throw ConfigError("v must be entrywise non-negative");
  KernelBundle b;
  b.k = {0, 0, 0};
  b.sign = sign;
  b.vhat = double(sign);
  b.lambda = lambda;
  b.v = v;
  finish_bundle(b, opts);
  return b;
}

TraceCheck trace_formula_check(const KernelBundle& b, double rel_tol) {
  if (!b.admissible) throw Error("trace formula requires an admissible bundle");
  TraceCheck out;
  // tr(E - h) through B = e^{-K} - 1: E - h = Bh + hB + BhB, which avoids
  // cancelling the O(tr h) bulk when the correlation term is tiny
  const Matrix bm1 = sym_func(b.K, [](double x) { return std::expm1(-x); }, "expm1");
  double tr_diff = 0.0;
  const Eigen::Index dim = b.lambda.size();
  for (Eigen::Index i = 0; i < dim; ++i) tr_diff += 2.0 * bm1(i, i) * b.lambda[i];
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) tr_diff += bm1(i, j) * b.lambda[j] * bm1(j, i);
  out.lhs = tr_diff - double(b.sign) * b.v.squaredNorm();

  const Eigen::Index n = b.lambda.size();
  std::vector<double> lam(static_cast<std::size_t>(n)), wsq(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    lam[std::size_t(i)] = b.lambda[i];
    wsq[std::size_t(i)] = b.v[i] * b.v[i];
  }
  std::vector<double> sorted = lam;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double scale = sorted[sorted.size() / 2];

  auto integrand = [&](double t) {
    double x = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i)
      x += wsq[i] * lam[i] / (lam[i] * lam[i] + t * t);
    return log1p_minus_x(2.0 * double(b.sign) * x);
  };
  out.rhs = integrate_half_line(integrand, scale, rel_tol) / 3.141592653589793;
  return out;
}

Interpolants interpolants(const KernelBundle& b, double t) {
  if (!b.admissible) throw Error("interpolants require an admissible bundle");
  const Matrix etk = sym_exp(Matrix(t * b.K));
  const Matrix emtk = sym_exp(Matrix(-t * b.K));
  const Matrix hp2p = Matrix(b.lambda.asDiagonal()) + 2.0 * b.p_op();
  const Matrix plus = symmetrized(etk * hp2p * etk);
  const Matrix minus = symmetrized(emtk * b.lambda.asDiagonal() * emtk);
  Interpolants out;
  out.a = 0.5 * (plus + minus) - Matrix(b.lambda.asDiagonal());
  out.b = 0.5 * (plus - minus);
  return out;
}

Matrix integral_b(const KernelBundle& b) {
  // composite Simpson on 21 nodes (20 intervals)
  const int nodes = 21;
  const double h = 1.0 / double(nodes - 1);
  Matrix acc = Matrix::Zero(b.lambda.size(), b.lambda.size());
  for (int i = 0; i < nodes; ++i) {
    const double w = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += w * interpolants(b, double(i) * h).b;
  }
  return Matrix(acc * (h / 3.0));
}

double diagonalization_residual(const KernelBundle& b) {
  const Matrix hp2p = Matrix(b.lambda.asDiagonal()) + 2.0 * b.p_op();
  const Matrix lhs = b.expK * hp2p * b.expK;
  const Matrix rhs = b.expmK * b.lambda.asDiagonal() * b.expmK;
  return max_abs(Matrix(lhs - rhs));
}

namespace {

struct BoundAccum {
  BoundReport rep;
  explicit BoundAccum(const std::string& name) { rep.bound_name = name; }
  // records lhs - rhs for the inequality lhs <= rhs
  void le(double lhs, double rhs, int i, int j) {
    const double viol = lhs - rhs;
    if (rep.worst_i < 0 || viol > rep.max_violation) {
      rep.max_violation = viol;
      rep.worst_i = i;
      rep.worst_j = j;
    }
  }
};

}  // namespace

std::vector<BoundReport> verify_element_bounds(const KernelBundle& b) {
  if (!b.admissible) throw Error("element bounds require an admissible bundle");
  const Eigen::Index n = b.lambda.size();
  const double d = b.vhinv;
  const auto vv = [&](Eigen::Index i, Eigen::Index j) { return b.v[i] * b.v[j]; };
  const auto wij = [&](Eigen::Index i, Eigen::Index j) {
    return vv(i, j) / (b.lambda[i] + b.lambda[j]);
  };

  const Matrix em2k = symmetrized(b.expmK * b.expmK);
  const Matrix ep2k = symmetrized(b.expK * b.expK);
  const Matrix intb = integral_b(b);

  const double tgrid[] = {0.0, 0.25, 0.5, 0.75, 1.0};

  std::vector<BoundReport> out;
  if (b.sign == 0) {
    // V_k = 0: every bound is trivially tight at 0; report the defining gaps.
    BoundAccum a("k-zero-potential");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a.le(std::abs(b.K(i, j)), 0.0, int(i), int(j));
    out.push_back(a.rep);
    return out;
  }

  if (b.sign > 0) {
    BoundAccum e2k_lower("e-2K-e2K-lower"), e2k_upper("e-2K-e2K-upper");
    BoundAccum k_lower("K-lower"), k_upper("K-upper");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double w = wij(i, j);
        e2k_lower.le(2.0 / (1.0 + 2.0 * d) * w, em2k(i, j) - (i == j ? 1.0 : 0.0), int(i), int(j));
        e2k_lower.le(2.0 / (1.0 + 2.0 * d) * w, (i == j ? 1.0 : 0.0) - ep2k(i, j), int(i), int(j));
        e2k_upper.le(em2k(i, j) - (i == j ? 1.0 : 0.0), 2.0 * w, int(i), int(j));
        e2k_upper.le((i == j ? 1.0 : 0.0) - ep2k(i, j), 2.0 * w, int(i), int(j));
        k_lower.le(w / (1.0 + 2.0 * d), -b.K(i, j), int(i), int(j));
        k_upper.le(-b.K(i, j), w, int(i), int(j));
      }
    out.push_back(e2k_lower.rep);
    out.push_back(e2k_upper.rep);
    out.push_back(k_lower.rep);
    out.push_back(k_upper.rep);

    BoundAccum sinh_b("sinh-tK"), cosh_b("cosh-tK"), etk_b("etK-minus-1");
    BoundAccum ab_b("At-Bt"), kb_b("K-Bt-anticommutator");
    for (double t : tgrid) {
      const Matrix st = 0.5 * (sym_exp(Matrix(-t * b.K)) - sym_exp(Matrix(t * b.K)));
      const Matrix ct = 0.5 * (sym_exp(Matrix(-t * b.K)) + sym_exp(Matrix(t * b.K)));
      const Matrix etk = sym_exp(Matrix(t * b.K));
      const Interpolants ip = interpolants(b, t);
      const Matrix kb = symmetrized(b.K * ip.b + ip.b * b.K);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const double w = wij(i, j);
          sinh_b.le(t * w / (1.0 + 2.0 * d), st(i, j), int(i), int(j));
          sinh_b.le(st(i, j), t * w, int(i), int(j));
          cosh_b.le(0.0, ct(i, j) - (i == j ? 1.0 : 0.0), int(i), int(j));
          cosh_b.le(ct(i, j) - (i == j ? 1.0 : 0.0), d / (1.0 + 2.0 * d) * w, int(i), int(j));
          etk_b.le(std::abs(etk(i, j) - (i == j ? 1.0 : 0.0)), w, int(i), int(j));
          ab_b.le(std::abs(ip.a(i, j)), 3.0 * (1.0 + d) * (1.0 + d) * vv(i, j), int(i), int(j));
          ab_b.le(std::abs(ip.b(i, j)), 3.0 * (1.0 + d) * (1.0 + d) * vv(i, j), int(i), int(j));
          kb_b.le(std::abs(kb(i, j)), 6.0 * (1.0 + d) * (1.0 + d) * d * vv(i, j), int(i), int(j));
        }
    }
    out.push_back(sinh_b.rep);
    out.push_back(cosh_b.rep);
    out.push_back(etk_b.rep);
    out.push_back(ab_b.rep);
    out.push_back(kb_b.rep);

    BoundAccum ib("int-Bt-band");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        ib.le(std::abs(intb(i, j) - 0.5 * vv(i, j)), (6.0 + d) * d * vv(i, j), int(i), int(j));
    out.push_back(ib.rep);

    BoundAccum ub("U-minus-1");
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        ub.le(std::abs(b.U(i, j) - (i == j ? 1.0 : 0.0)), 3.0 * (1.0 + d) * wij(i, j), int(i),
              int(j));
        ub.le(std::abs(b.U(j, i) - (i == j ? 1.0 : 0.0)), 3.0 * (1.0 + d) * wij(i, j), int(i),
              int(j));
      }
    out.push_back(ub.rep);
    return out;
  }

  // attractive mode, d < 1/2
  const double inv = 1.0 / (1.0 - 2.0 * d);
  BoundAccum e2k_lower("attr-e-2K-e2K-lower"), e2k_upper("attr-e-2K-e2K-upper");
  BoundAccum k_lower("attr-K-lower"), k_upper("attr-K-upper");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = wij(i, j);
      e2k_lower.le(2.0 * w, (i == j ? 1.0 : 0.0) - em2k(i, j), int(i), int(j));
      e2k_lower.le(2.0 * w, ep2k(i, j) - (i == j ? 1.0 : 0.0), int(i), int(j));
      e2k_upper.le((i == j ? 1.0 : 0.0) - em2k(i, j), 2.0 * inv * w, int(i), int(j));
      e2k_upper.le(ep2k(i, j) - (i == j ? 1.0 : 0.0), 2.0 * inv * w, int(i), int(j));
      k_lower.le(w, b.K(i, j), int(i), int(j));
      k_upper.le(b.K(i, j), inv * w, int(i), int(j));
    }
  out.push_back(e2k_lower.rep);
  out.push_back(e2k_upper.rep);
  out.push_back(k_lower.rep);
  out.push_back(k_upper.rep);

  BoundAccum sinh_b("attr-sinh-tK"), cosh_b("attr-cosh-tK"), etk_b("attr-etK-minus-1");
  BoundAccum ab_b("attr-At-Bt"), kb_b("attr-K-Bt-anticommutator");
  const double abu = 3.0 * (1.0 + d) * (1.0 + d) * inv * inv;
  for (double t : tgrid) {
    const Matrix st = 0.5 * (sym_exp(Matrix(t * b.K)) - sym_exp(Matrix(-t * b.K)));
    const Matrix ct = 0.5 * (sym_exp(Matrix(t * b.K)) + sym_exp(Matrix(-t * b.K)));
    const Matrix etk = sym_exp(Matrix(t * b.K));
    const Interpolants ip = interpolants(b, t);
    const Matrix kb = symmetrized(b.K * ip.b + ip.b * b.K);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double w = wij(i, j);
        sinh_b.le(t * w, st(i, j), int(i), int(j));
        sinh_b.le(st(i, j), t * inv * w, int(i), int(j));
        cosh_b.le(0.0, ct(i, j) - (i == j ? 1.0 : 0.0), int(i), int(j));
        cosh_b.le(ct(i, j) - (i == j ? 1.0 : 0.0), std::min(1.0, d) * inv * w, int(i), int(j));
        etk_b.le(0.0, etk(i, j) - (i == j ? 1.0 : 0.0), int(i), int(j));
        etk_b.le(etk(i, j) - (i == j ? 1.0 : 0.0), inv * w, int(i), int(j));
        ab_b.le(std::abs(ip.a(i, j)), abu * vv(i, j), int(i), int(j));
        ab_b.le(std::abs(ip.b(i, j)), abu * vv(i, j), int(i), int(j));
        kb_b.le(std::abs(kb(i, j)), (6.0 + d) * d * inv * inv * inv * vv(i, j), int(i), int(j));
      }
  }
  out.push_back(sinh_b.rep);
  out.push_back(cosh_b.rep);
  out.push_back(etk_b.rep);
  out.push_back(ab_b.rep);
  out.push_back(kb_b.rep);

  BoundAccum ib("attr-int-Bt-band");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      ib.le(std::abs(intb(i, j) + 0.5 * vv(i, j)), (6.0 + d) * d * inv * inv * vv(i, j), int(i),
            int(j));
  out.push_back(ib.rep);
  return out;
}

HsNorms hs_norms(const KernelBundle& b) {
  HsNorms out;
  out.k_hs = b.K.norm();
  const Matrix diff = b.Etilde - Matrix(b.lambda.asDiagonal());
  out.etilde_minus_h_hs = diff.norm();
  double vhv = 0.0;
  for (Eigen::Index i = 0; i < b.lambda.size(); ++i) vhv += b.v[i] * b.v[i] * b.lambda[i];
  const double v4 = std::pow(b.v.squaredNorm(), 2);
  // |v|^4 branch picks up (1-2<v,h^-1 v>)^-2 in the attractive mode, where
  // the elementwise e^{-2K} bound carries that factor
  const double v4_cap =
      b.sign < 0 ? v4 / (b.admissibility_margin * b.admissibility_margin) : v4;
  const double cap = std::min(2.0 * vhv, v4_cap);
  out.margin = cap - out.etilde_minus_h_hs * out.etilde_minus_h_hs;
  out.inequality_holds = out.margin >= -1e-12 * std::max(cap, 1.0);
  return out;
}

double negation_symmetry_defect(const KernelBundle& plus, const KernelBundle& minus) {
  const Eigen::Index n = plus.lambda.size();
  if (minus.lambda.size() != n) throw Error("bundle dimensions differ under negation");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Momentum pi = plus.lune.points[std::size_t(i)];
      const Momentum pj = plus.lune.points[std::size_t(j)];
      const std::size_t mi = minus.lune.index_of(-pi);
      const std::size_t mj = minus.lune.index_of(-pj);
      worst = std::max(worst,
                       std::abs(plus.K(i, j) - minus.K(Eigen::Index(mi), Eigen::Index(mj))));
    }
  return worst;
}

}  // namespace fg
