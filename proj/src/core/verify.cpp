#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <random>
#include <set>

#include "correlation.hpp"
#include "fock.hpp"
#include "kernel.hpp"
#include "plasmon.hpp"
#include "quadrature.hpp"
#include "riemann.hpp"

namespace fg {

namespace {

struct Suite {
  std::string name;
  std::function<InvariantResult(const BuildOptions&, int jobs)> run;
};

InvariantResult make_result(const std::string& name, bool passed, double worst,
                            const std::string& detail) {
  InvariantResult r;
  r.name = name;
  r.passed = passed;
  r.worst = worst;
  r.detail = detail;
  return r;
}

// -------------------------- lattice suites ---------------------------------

InvariantResult lattice_exactness(const BuildOptions&, int) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kf2_dist(1, 400), kc(-6, 6);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::int64_t kf2 = kf2_dist(rng);
    Momentum k{kc(rng), kc(rng), kc(rng)};
    if (k.is_zero()) k = {1, 0, 0};
    const Lune scan = enumerate_lune(kf2, k);
    const Lune translated = lune_from_ball(enumerate_fermi_ball(kf2), k);
    const bool same = scan.points == translated.points && scan.twice_lambda == translated.twice_lambda;
    if (!same) return make_result("lattice.exactness", false, 1.0,
                                  "mismatch at kf2=" + std::to_string(kf2) + " k=" + to_string(k));
    worst = std::max(worst, 0.0);
  }
  return make_result("lattice.exactness", true, 0.0, "box scan vs ball translation, 25 draws");
}

InvariantResult lattice_lambda_positivity(const BuildOptions&, int) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> kf2_dist(1, 400), kc(-6, 6);
  std::int64_t worst = std::numeric_limits<std::int64_t>::max();
  for (int trial = 0; trial < 25; ++trial) {
    const std::int64_t kf2 = kf2_dist(rng);
    Momentum k{kc(rng), kc(rng), kc(rng)};
    if (k.is_zero()) k = {1, 0, 0};
    for (std::int64_t tl : enumerate_lune(kf2, k).twice_lambda) worst = std::min(worst, tl);
  }
  return make_result("lattice.lambda-positivity", worst >= 1, 0.5 * double(worst),
                     "min lambda over 25 draws (must be >= 1/2)");
}

InvariantResult lattice_partition(const BuildOptions&, int) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> kf2_dist(1, 100), kc(-4, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::int64_t kf2 = kf2_dist(rng);
    Momentum k{kc(rng), kc(rng), kc(rng)};
    if (k.is_zero()) k = {0, 0, 1};
    const Lune lune = enumerate_lune(kf2, k);
    std::set<Momentum> seen;
    std::size_t total = 0;
    for (const LuneSlice& s : lune_slices(lune)) {
      for (const Momentum& p : s.points)
        if (!seen.insert(p).second)
          return make_result("lattice.partition", false, 1.0, "duplicate point across slices");
      total += s.points.size();
    }
    if (total != lune.size())
      return make_result("lattice.partition", false, 1.0, "slices do not cover the lune");
  }
  return make_result("lattice.partition", true, 0.0, "disjoint cover over 20 draws");
}

InvariantResult lattice_covolume(const BuildOptions&, int) {
  for (int x = -10; x <= 10; ++x)
    for (int y = -10; y <= 10; ++y)
      for (int z = -10; z <= 10; ++z) {
        const Momentum k{x, y, z};
        if (k.is_zero() || k.norm2() > 100) continue;
        const auto [v1, v2] = find_perp_generators(k);
        const std::int64_t g = gcd3(k);
        const std::int64_t gram = v1.norm2() * v2.norm2() - v1.dot(v2) * v1.dot(v2);
        if (gram * g * g != k.norm2() || k.dot(v1) != 0 || k.dot(v2) != 0)
          return make_result("lattice.covolume", false, double(gram),
                             "covolume defect at k=" + to_string(k));
      }
  return make_result("lattice.covolume", true, 0.0, "Gram det = (|k|/gcd)^2 for all |k| <= 10");
}

InvariantResult lattice_cardinality(const BuildOptions&, int) {
  double worst = 0.0;
  for (std::int64_t kf2 : {1, 4, 25, 100, 225, 400})
    for (int kx = 1; kx <= 6; ++kx) {
      for (const Momentum& k : {Momentum{kx, 0, 0}, Momentum{kx, kx > 3 ? 0 : kx, 0}}) {
        if (k.norm2() > 36) continue;
        const double kf = std::sqrt(double(kf2));
        const double cap = 20.0 * std::min(kf * kf * std::sqrt(double(k.norm2())), kf * kf * kf);
        const double ratio = double(count_lune(kf2, k)) / cap;
        worst = std::max(worst, ratio);
      }
    }
  return make_result("lattice.cardinality", worst <= 1.0, worst,
                     "|L_k| / (20 min{kF^2|k|, kF^3}), must stay <= 1");
}

// -------------------------- riemann suites ---------------------------------

InvariantResult riemann_slice_identity(const BuildOptions&, int) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  double worst = 0.0;
  for (std::int64_t kf2 : {1, 2, 3, 4, 5, 10, 25, 50, 75, 100})
    for (const Momentum& k :
         {Momentum{1, 0, 0}, Momentum{1, 1, 0}, Momentum{2, 1, 0}, Momentum{0, 0, 3},
          Momentum{2, 2, 2}, Momentum{4, 0, 0}}) {
      const Lune lune = enumerate_lune(kf2, k);
      if (lune.size() == 0) continue;
      for (int trial = 0; trial < 2; ++trial) {
        const double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng), w = coef(rng);
        auto f = [&](double lam) {
          return a + b * lam + c / (1.0 + lam * lam) + d * std::exp(-lam / 3.0) * std::cos(w * lam);
        };
        double direct = 0.0;
        for (std::size_t i = 0; i < lune.size(); ++i) direct += f(lune.lambda(i));
        const double sliced = slice_summation(lune, f);
        const double rel = std::abs(direct - sliced) / std::max(std::abs(direct), 1e-12);
        worst = std::max(worst, rel);
      }
    }
  return make_result("riemann.slice-identity", worst <= 1e-12, worst,
                     "max relative gap between slice and direct sums");
}

InvariantResult riemann_beta_minus_one(const BuildOptions&, int) {
  const auto checks = check_minus_one_asymptotics({625, 2500, 10000}, {1, 0, 0});
  const bool decreasing = checks[0].relative_error > checks[1].relative_error &&
                          checks[1].relative_error > checks[2].relative_error;
  const bool small = checks[2].relative_error < 0.1;
  return make_result("riemann.beta-minus-one", decreasing && small, checks[2].relative_error,
                     "relative error vs 2 pi kF at kf2 = 10000; must decrease along the list");
}

InvariantResult riemann_regime_switch(const BuildOptions&, int) {
  for (std::int64_t kf2 : {1, 4, 9, 25}) {
    const int two_kf = 2 * int(std::ceil(std::sqrt(double(kf2))));
    const Momentum k{two_kf + 1, 0, 0};
    const FermiBall ball = enumerate_fermi_ball(kf2);
    const Lune lune = lune_from_ball(ball, k);
    if (lune.size() != ball.size())
      return make_result("riemann.regime-switch", false, double(lune.size()),
                         "|L_k| != |B_F| for |k| > 2kF at kf2=" + std::to_string(kf2));
  }
  return make_result("riemann.regime-switch", true, 0.0, "lune degenerates to translated ball");
}

InvariantResult riemann_bound_brackets(const BuildOptions&, int) {
  double worst = 0.0;
  std::string detail = "all bracket checks passed";
  bool ok = true;
  for (std::int64_t kf2 : {4, 25, 100, 256, 400})
    for (const Momentum& k : {Momentum{1, 0, 0}, Momentum{2, 1, 0}, Momentum{3, 3, 3},
                              Momentum{6, 0, 0}, Momentum{1, 1, 1}}) {
      const Lune lune = enumerate_lune(kf2, k);
      if (lune.size() == 0) continue;
      const double kf = std::sqrt(double(kf2));
      const BoundCheck b0 = check_bounds(lune, 0.0);
      if (b0.regime == Regime::BelowTwoKf && (b0.ratio < 0.05 || b0.ratio > 20.0)) {
        ok = false;
        worst = b0.ratio;
        detail = "beta=0 ratio out of [0.05, 20] at kf2=" + std::to_string(kf2);
      }
      if (k.norm2() < 4 * kf2) {
        const double s_m1 = power_sum(lune, -1.0).value;
        if (s_m1 > 20.0 * kf) {
          ok = false;
          worst = s_m1 / kf;
          detail = "beta=-1 sum exceeds 20 kF";
        }
        const BoundCheck b1 = check_bounds(lune, 1.0);
        if (b1.ratio < 0.1) {
          ok = false;
          worst = b1.ratio;
          detail = "beta=1 lower ratio below 0.1";
        }
      }
    }
  return make_result("riemann.bound-brackets", ok, worst, detail);
}

InvariantResult riemann_continuum_consistency(const BuildOptions&, int) {
  // exact lattice counts fluctuate, so the deviation is required to shrink
  // end to end rather than strictly at every sample
  bool ok = true;
  double worst = 0.0;
  for (double beta : {0.0, 1.0}) {
    double first = -1.0, last = 0.0;
    for (std::int64_t kf2 : {100, 400, 2500}) {
      const Lune lune = lune_from_ball(enumerate_fermi_ball(kf2), {1, 0, 0});
      const double kf = std::sqrt(double(kf2));
      const double ratio = power_sum(lune, beta).value / continuum_integral(kf, 1.0, beta);
      const double dev = std::abs(ratio - 1.0);
      worst = std::max(worst, dev);
      if (dev > 0.15) ok = false;
      if (first < 0.0) first = dev;
      last = dev;
    }
    if (last >= first) ok = false;
  }
  return make_result("riemann.continuum-consistency", ok, worst,
                     "|sum/integral - 1| for beta in {0,1}, shrinking over kf2 in {100,400,2500}");
}

// -------------------------- one-body suites --------------------------------

Vector random_lambda(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> lam(0.5, 30.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = lam(rng);
  return v;
}

Vector random_vvec(std::mt19937_64& rng, int dim, double scale) {
  std::uniform_real_distribution<double> mag(0.0, scale);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = mag(rng);
  return v;
}

InvariantResult onebody_quadrature(const BuildOptions&, int) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ab(0.5, 100.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = ab(rng), b = ab(rng);
    const double i1 = integrate_half_line([&](double t) { return a / (a * a + t * t); }, a);
    const double i2 = integrate_half_line(
        [&](double t) { return t * t / ((a * a + t * t) * (b * b + t * t)); }, 0.5 * (a + b));
    const double pi = 3.141592653589793;
    worst = std::max(worst, std::abs(i1 - pi / 2.0) / (pi / 2.0));
    worst = std::max(worst, std::abs(i2 - pi / (2.0 * (a + b))) / (pi / (2.0 * (a + b))));
  }
  return make_result("onebody.quadrature-identities", worst <= 1e-10, worst,
                     "pi/2 and pi/(2(a+b)) identities, 20 random (a,b)");
}

std::vector<KernelBundle> instance_grid(const BuildOptions& opts) {
  std::vector<KernelBundle> bundles;
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 6; ++trial) {
    std::uniform_int_distribution<int> dim_dist(3, 40);
    const int dim = dim_dist(rng);
    bundles.push_back(build_kernel_bundle_raw(random_lambda(rng, dim),
                                              random_vvec(rng, dim, 0.8), 1, opts));
  }
  // lattice repulsive instance (Coulomb)
  {
    FermiSystem sys;
    sys.kf2 = 25;
    sys.s = 1;
    sys.potential = Potential::coulomb(1.0);
    bundles.push_back(build_kernel_bundle(sys, {1, 0, 0}, opts));
  }
  // admissible attractive instances
  {
    FermiSystem sys;
    sys.kf2 = 25;
    sys.s = 1;
    sys.potential = Potential::from_table({{{1, 0, 0}, -1.0}});
    bundles.push_back(build_kernel_bundle(sys, {1, 0, 0}, opts));
  }
  for (int trial = 0; trial < 3; ++trial) {
    const int dim = 8 + 4 * trial;
    Vector lam = random_lambda(rng, dim);
    Vector v = random_vvec(rng, dim, 0.5);
    double d = 0.0;
    for (int i = 0; i < dim; ++i) d += v[i] * v[i] / lam[i];
    if (2.0 * d >= 0.9) v *= std::sqrt(0.4 / d);  // keep 1 - 2<v,h^-1 v> away from 0
    bundles.push_back(build_kernel_bundle_raw(lam, v, -1, opts));
  }
  return bundles;
}

InvariantResult onebody_diag_residual(const BuildOptions& opts, int) {
  double worst = 0.0;
  for (const KernelBundle& b : instance_grid(opts)) {
    const double rel = diagonalization_residual(b) / b.lambda.maxCoeff();
    worst = std::max(worst, rel);
  }
  return make_result("onebody.diagonalization-residual", worst <= 1e-9, worst,
                     "|e^K(h+2P)e^K - e^-K h e^-K|_max / |h|_max over the instance grid");
}

InvariantResult onebody_trace_formula(const BuildOptions& opts, int) {
  double worst = 0.0;
  for (const KernelBundle& b : instance_grid(opts)) {
    const TraceCheck chk = trace_formula_check(b);
    worst = std::max(worst, std::abs(chk.lhs - chk.rhs) / std::max(std::abs(chk.lhs), 1e-12));
  }
  return make_result("onebody.trace-formula", worst <= 1e-7, worst,
                     "|tr(E-h-P) - F-integral| relative over the instance grid");
}

InvariantResult onebody_isospectral(const BuildOptions& opts, int) {
  double worst = 0.0;
  for (const KernelBundle& b : instance_grid(opts)) {
    Eigen::SelfAdjointEigenSolver<Matrix> ee(b.E), et(b.Etilde);
    const Vector de = ee.eigenvalues(), dt = et.eigenvalues();
    for (Eigen::Index i = 0; i < de.size(); ++i)
      worst = std::max(worst, std::abs(de[i] - dt[i]) / std::max(std::abs(dt[i]), 1e-12));
  }
  return make_result("onebody.isospectrality", worst <= 1e-9, worst,
                     "relative eigenvalue gap between E and Etilde");
}

InvariantResult onebody_conjugation(const BuildOptions& opts, int) {
  double worst = 0.0;
  for (const KernelBundle& b : instance_grid(opts)) {
    const double hmax = b.lambda.maxCoeff();
    worst = std::max(worst, max_abs(Matrix(b.U * b.E * b.U.transpose() - b.Etilde)) / hmax);
    const Matrix eye = Matrix::Identity(b.lambda.size(), b.lambda.size());
    worst = std::max(worst, max_abs(Matrix(b.U * b.U.transpose() - eye)));
  }
  return make_result("onebody.conjugation", worst <= 1e-8, worst,
                     "|U E U^T - Etilde|_max / |h|_max and U orthogonality");
}

InvariantResult onebody_ordering(const BuildOptions& opts, int) {
  double worst = 0.0;
  for (const KernelBundle& b : instance_grid(opts)) {
    if (b.sign <= 0) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(b.Etilde - Matrix(b.lambda.asDiagonal())));
    worst = std::min(worst, es.eigenvalues().minCoeff() / b.lambda.maxCoeff());
  }
  return make_result("onebody.ordering", worst >= -1e-10, worst,
                     "min eig(Etilde - h)/|h|_max over repulsive instances");
}

InvariantResult onebody_sign_structure(const BuildOptions& opts, int) {
  double worst = 0.0;
  for (const KernelBundle& b : instance_grid(opts)) {
    if (b.sign == 0) continue;
    const Matrix m = b.sign > 0 ? Matrix(-b.K) : b.K;
    worst = std::min(worst, m.minCoeff());
  }
  return make_result("onebody.sign-structure", worst >= -1e-12, worst,
                     "entrywise minimum of -K (repulsive) / K (attractive)");
}

InvariantResult onebody_element_bounds(const BuildOptions& opts, int) {
  double worst = -1e300;
  std::string where = "none";
  for (const KernelBundle& b : instance_grid(opts))
    for (const BoundReport& rep : verify_element_bounds(b))
      if (rep.max_violation > worst) {
        worst = rep.max_violation;
        where = rep.bound_name;
      }
  return make_result("onebody.element-bounds", worst <= 1e-10, worst,
                     "max signed violation, worst family: " + where);
}

InvariantResult onebody_hs_bounds(const BuildOptions& opts, int) {
  double worst = 0.0;
  bool ok = true;
  for (const KernelBundle& b : instance_grid(opts)) {
    const HsNorms h = hs_norms(b);
    if (!h.inequality_holds) ok = false;
    worst = std::min(worst, h.margin);
  }
  return make_result("onebody.hs-bounds", ok, worst,
                     "min{2<v,hv>, |v|^4} - |Etilde-h|_HS^2, must stay >= 0");
}

InvariantResult onebody_negation_symmetry(const BuildOptions& opts, int) {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  double worst = 0.0;
  for (const Momentum& k : {Momentum{1, 0, 0}, Momentum{1, 1, 0}, Momentum{2, 1, 0}}) {
    const KernelBundle plus = build_kernel_bundle(sys, k, opts);
    const KernelBundle minus = build_kernel_bundle(sys, -k, opts);
    worst = std::max(worst, negation_symmetry_defect(plus, minus));
  }
  return make_result("onebody.negation-symmetry", worst <= 1e-12, worst,
                     "max |<e_p,K_k e_q> - <e_-p,K_-k e_-q>|");
}

// ------------------------ correlation suites -------------------------------

InvariantResult correlation_per_k(const BuildOptions& opts, int jobs) {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(4.0 * 3.141592653589793);
  const BosResult bos = e_corr_bos(sys, 3, jobs);
  double worst = 0.0;
  for (const PerKTerm& term : bos.per_k) {
    const KernelBundle b = build_kernel_bundle(sys, term.k, opts);
    const TraceCheck chk = trace_formula_check(b);
    worst = std::max(worst,
                     std::abs(term.e_bos - chk.lhs) / std::max(std::abs(chk.lhs), 1e-12));
  }
  return make_result("correlation.per-k-crosscheck", worst <= 1e-7, worst,
                     "per-k quadrature term vs spectral trace, Coulomb kf2=25 cutoff 3");
}

InvariantResult correlation_signs(const BuildOptions&, int jobs) {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  const BosResult bos = e_corr_bos(sys, 5, jobs);
  const double ex = e_corr_ex(sys, 3, jobs);
  bool ok = bos.total <= 0.0 && ex >= 0.0;
  for (const PerKTerm& t : bos.per_k)
    if (t.e_bos > 0.0) ok = false;
  return make_result("correlation.signs", ok, bos.total,
                     "e_bos <= 0 per mode and in total; e_ex >= 0 (repulsive)");
}

InvariantResult correlation_exchange_reduction(const BuildOptions&, int jobs) {
  // literal quadruple sum with the delta constraint, over all k,l in the
  // support box, as an independent oracle
  double worst = 0.0;
  for (std::int64_t kf2 : {1, 2, 4}) {
    FermiSystem sys;
    sys.kf2 = kf2;
    sys.s = 1;
    std::map<Momentum, double> entries;
    for (int x = -3; x <= 3; ++x)
      for (int y = -3; y <= 3; ++y)
        for (int z = -3; z <= 3; ++z) {
          const Momentum k{x, y, z};
          if (k.is_zero() || k.norm2() > 9) continue;
          entries[k] = 1.0 / (1.0 + 0.3 * double(k.norm2()));
        }
    sys.potential = Potential::from_table(entries);

    const int cutoff = 3 + 2 * int(std::ceil(std::sqrt(double(kf2))));
    const double reduced = e_corr_ex(sys, cutoff, jobs);

    const FermiBall ball = enumerate_fermi_ball(kf2);
    double literal = 0.0;
    const double c = sys.coupling_scale();
    const double pref = double(sys.s) * c * c / (4.0 * kTwoPiCubed * kTwoPiCubed);
    const auto ks = momentum_shell(cutoff);
    for (const Momentum& k : ks) {
      const double vk = sys.vhat(k);
      if (vk == 0.0) continue;
      const Lune lk = lune_from_ball(ball, k);
      for (const Momentum& l : ks) {
        const double vl = sys.vhat(l);
        if (vl == 0.0) continue;
        const Lune ll = lune_from_ball(ball, l);
        for (std::size_t a = 0; a < lk.size(); ++a) {
          const Momentum p = lk.points[a];
          if (!ll.contains(p)) continue;
          for (std::size_t bb = 0; bb < lk.size(); ++bb) {
            const Momentum q = lk.points[bb];
            if (!ll.contains(q)) continue;
            if (!(p + q == k + l)) continue;
            literal +=
                pref * vk * vl / (0.5 * double(lk.twice_lambda[a] + lk.twice_lambda[bb]));
          }
        }
      }
    }
    worst = std::max(worst, std::abs(reduced - literal) / std::max(std::abs(literal), 1e-300));
  }
  return make_result("correlation.exchange-reduction", worst <= 1e-12, worst,
                     "reduced e_ex vs literal delta-constrained quadruple sum");
}

InvariantResult correlation_cutoff_monotonicity(const BuildOptions&, int jobs) {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  double prev = 0.0;
  bool ok = true;
  for (int cutoff = 1; cutoff <= 5; ++cutoff) {
    const double e = std::abs(e_corr_bos(sys, cutoff, jobs).total);
    if (e + 1e-15 < prev) ok = false;
    prev = e;
  }
  return make_result("correlation.cutoff-monotonicity", ok, prev,
                     "|e_bos| non-decreasing in the cutoff (repulsive)");
}

InvariantResult correlation_order_separation(const BuildOptions&, int jobs) {
  double prev = -1.0;
  bool ok = true;
  double last = 0.0;
  for (std::int64_t kf2 : {25, 100, 400}) {
    FermiSystem sys;
    sys.kf2 = kf2;
    sys.s = 1;
    sys.potential = Potential::coulomb(1.0);
    const int cutoff = int(std::ceil(std::sqrt(double(kf2))));
    const double ratio =
        std::abs(e_corr_bos(sys, cutoff, jobs).total) / error_scale(sys, cutoff);
    if (ratio <= prev) ok = false;
    prev = ratio;
    last = ratio;
  }
  return make_result("correlation.order-separation", ok, last,
                     "|e_bos|/error_scale increasing over kf2 in {25,100,400}");
}

InvariantResult correlation_attractive_margin(const BuildOptions&, int) {
  // V_k = -(1-eps) 4 pi^2 / s on |k| = 1 at large kF: margin near eps
  const double eps = 0.4;
  FermiSystem sys;
  sys.kf2 = 2500;
  sys.s = 1;
  std::map<Momentum, double> entries;
  const double val = -(1.0 - eps) * 4.0 * 9.869604401089358 / double(sys.s);
  entries[{1, 0, 0}] = val;
  entries[{0, 1, 0}] = val;
  entries[{0, 0, 1}] = val;
  sys.potential = Potential::from_table(entries);
  double worst = 0.0;
  for (const AttractiveMargin& m : attractive_sweep(sys, eps, 1)) {
    if (!m.attractive) continue;
    worst = std::max(worst, std::abs(m.margin - eps));
    if (m.flagged) return make_result("correlation.attractive-margin", false, m.margin,
                                      "admissible mode was flagged");
  }
  return make_result("correlation.attractive-margin", worst <= 0.15, worst,
                     "|margin - eps| for V_k = -(1-eps)4pi^2/s at kf2=2500");
}

// --------------------------- plasmon suites --------------------------------

FermiSystem plasmon_system(std::int64_t kf2, double g) {
  FermiSystem sys;
  sys.kf2 = kf2;
  sys.s = 1;
  sys.mean_field = false;
  sys.potential = Potential::coulomb(g);
  return sys;
}

InvariantResult plasmon_eigen_residual(const BuildOptions&, int) {
  double worst = 0.0;
  for (std::int64_t kf2 : {400, 1600}) {
    const PlasmonMode mode = compute_mode(plasmon_system(kf2, 4.0 * 3.141592653589793), {1, 0, 0});
    worst = std::max(worst, mode.eigen_residual);
  }
  return make_result("plasmon.eigenpair-residual", worst <= 1e-9, worst,
                     "|(h^2+2P_w)phi - eps_var phi| / eps_var");
}

InvariantResult plasmon_epsilon_bounds(const BuildOptions&, int) {
  double worst = 0.0;
  bool ok = true;
  for (std::int64_t kf2 : {400, 1600}) {
    const PlasmonMode m = compute_mode(plasmon_system(kf2, 4.0 * 3.141592653589793), {1, 0, 0});
    const double eps_var = 0.25 * m.epsilon * m.epsilon;
    const double lower = 2.0 * m.vhv + m.vh3v / m.vhv;
    if (eps_var < lower * (1.0 - 1e-12)) ok = false;
    worst = std::max(worst, (lower - eps_var) / lower);
    const double lm2 = m.lambda_max * m.lambda_max;
    if (2.0 * m.vhv > lm2) {
      const double upper = lower + 4.0 * m.vh3v * lm2 / ((2.0 * m.vhv - lm2) * (2.0 * m.vhv - lm2));
      if (eps_var > upper * (1.0 + 1e-12)) ok = false;
      worst = std::max(worst, (eps_var - upper) / upper);
    }
  }
  return make_result("plasmon.epsilon-bounds", ok, worst,
                     "two-sided bound on the top eigenvalue of Etilde^2");
}

InvariantResult plasmon_delocalization(const BuildOptions&, int) {
  double worst = 0.0;
  for (std::int64_t kf2 : {400, 1600}) {
    const PlasmonMode m = compute_mode(plasmon_system(kf2, 4.0 * 3.141592653589793), {1, 0, 0});
    worst = std::max(worst, m.phi_inf * std::sqrt(double(m.lune_size)));
  }
  return make_result("plasmon.delocalization", worst <= 10.0, worst,
                     "|phi|_inf sqrt(|L_k|) on threshold-satisfied Coulomb instances");
}

InvariantResult plasmon_closed_form(const BuildOptions&, int) {
  double worst = 0.0;
  for (std::int64_t kf2 : {400, 1600}) {
    const PlasmonMode m = compute_mode(plasmon_system(kf2, 4.0 * 3.141592653589793), {1, 0, 0});
    if (!m.formula_region)
      return make_result("plasmon.closed-form-phi", false, 0.0,
                         "formula region unexpectedly not entered");
    worst = std::max(worst, m.closed_form_deviation);
  }
  return make_result("plasmon.closed-form-phi", worst <= 1e-8, worst,
                     "max-norm gap between spectral phi and the component identity");
}

InvariantResult plasmon_threshold(const BuildOptions&, int) {
  const ModeThreshold sat = mode_threshold(plasmon_system(1600, 4.0 * 3.141592653589793), {1, 0, 0});
  FermiSystem weak = plasmon_system(1600, 1e-6);
  const ModeThreshold unsat = mode_threshold(weak, {1, 0, 0});
  const bool ok = sat.satisfied && !unsat.satisfied;
  return make_result("plasmon.threshold", ok, sat.lhs / sat.rhs,
                     "2<v,hv> > lambda_max^2 for strong coupling, violated for tiny coupling");
}

InvariantResult plasmon_dispersion_trend(const BuildOptions&, int jobs) {
  const auto rows = dispersion_table(4.0 * 3.141592653589793, 1, {400, 1600}, {{1, 0, 0}}, jobs);
  bool ok = rows[0].deviation + 1e-12 >= rows[1].deviation && rows[1].deviation <= 0.1;
  return make_result("plasmon.dispersion-trend", ok, rows[1].deviation,
                     "deviation from sqrt(2gn + (12/5)kF^2|k|^2), non-increasing in kF");
}

// ----------------------------- fock suites ---------------------------------

SparseState random_state(const ModeUniverse& u, std::mt19937_64& rng, int terms) {
  std::vector<int> inside, outside;
  for (int i = 0; i < u.size(); ++i) (u.inside(i) ? inside : outside).push_back(i);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  SparseState s;
  for (int t = 0; t < terms; ++t) {
    // excite a few particle-hole pairs out of the Fermi state
    Mask m;
    for (int i : inside) m.set(i);
    std::uniform_int_distribution<std::size_t> hole_pick(0, inside.size() - 1);
    std::uniform_int_distribution<std::size_t> part_pick(0, outside.size() - 1);
    std::uniform_int_distribution<int> npairs(0, 2);
    const int pairs = npairs(rng);
    for (int e = 0; e < pairs; ++e) {
      const int h = inside[hole_pick(rng)];
      const int p = outside[part_pick(rng)];
      if (!m.test(h) || m.test(p)) continue;
      m.clear(h);
      m.set(p);
    }
    s.add(m, amp(rng));
  }
  s.prune();
  if (s.empty()) s.add(Mask{}, 1.0);
  return s;
}

ModeUniverse small_universe(std::int64_t kf2, int s, const std::vector<Momentum>& ks) {
  std::set<Momentum> momenta;
  for (const Momentum& p : enumerate_fermi_ball(kf2).points) momenta.insert(p);
  for (const Momentum& k : ks)
    for (const Momentum& p : enumerate_lune(kf2, k).points) momenta.insert(p);
  return ModeUniverse(kf2, s, momenta);
}

InvariantResult fock_car(const BuildOptions&, int) {
  std::mt19937_64 rng(61);
  const ModeUniverse u = small_universe(1, 1, {{1, 0, 0}, {0, 1, 0}});
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SparseState s = random_state(u, rng, 3);
    std::uniform_int_distribution<int> pick(0, u.size() - 1);
    const int i = pick(rng), j = pick(rng);
    // {c_i, c_j*} = delta_ij
    SparseState anti = apply_c(apply_cdag(s, j), i);
    anti += apply_cdag(apply_c(s, i), j);
    SparseState expect;
    if (i == j) expect = s;
    worst = std::max(worst, max_amp_diff(anti, expect));
    // {c_i, c_j} = 0
    SparseState anti2 = apply_c(apply_c(s, j), i);
    anti2 += apply_c(apply_c(s, i), j);
    worst = std::max(worst, max_amp_diff(anti2, SparseState{}));
    // c_i^2 = 0
    worst = std::max(worst, apply_c(apply_c(s, i), i).norm());
  }
  return make_result("fock.car", worst <= 1e-12, worst,
                     "anticommutation relations on 100 random states");
}

InvariantResult fock_commutators(const BuildOptions&, int) {
  std::mt19937_64 rng(62);
  std::vector<Momentum> kset;
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y)
      for (int z = -2; z <= 2; ++z) {
        const Momentum k{x, y, z};
        if (!k.is_zero() && k.norm2() <= 4) kset.push_back(k);
      }
  double worst = 0.0;
  for (const Momentum& k : kset)
    for (const Momentum& l : kset) {
      const ModeUniverse u = small_universe(1, 1, {k, l});
      const Lune lk = enumerate_lune(1, k), ll = enumerate_lune(1, l);
      const SparseState s = random_state(u, rng, 2);
      for (const Momentum& p : lk.points)
        for (const Momentum& q : ll.points) {
          // [b_{k,p}, b*_{l,q}] = delta delta + eps_{k,l}(p;q)
          SparseState comm = apply_b(apply_bdag(s, u, l, q), u, k, p);
          SparseState tmp = apply_bdag(apply_b(s, u, k, p), u, l, q);
          tmp *= -1.0;
          comm += tmp;
          SparseState expect;
          if (k == l && p == q) expect = s;
          // eps = -(1/s) sum_sigma (d_pq c_{q-l} c*_{p-k} + d_{p-k,q-l} c*_q c_p)
          if (p == q) {
            SparseState e = apply_c(apply_cdag(s, u.index(p - k, 0)), u.index(q - l, 0));
            e *= -1.0;
            expect += e;
          }
          if (p - k == q - l) {
            SparseState e = apply_cdag(apply_c(s, u.index(p, 0)), u.index(q, 0));
            e *= -1.0;
            expect += e;
          }
          expect.prune(0.0);
          worst = std::max(worst, max_amp_diff(comm, expect));
          // [b,b] = 0
          SparseState bb = apply_b(apply_b(s, u, l, q), u, k, p);
          SparseState bb2 = apply_b(apply_b(s, u, k, p), u, l, q);
          bb2 *= -1.0;
          bb += bb2;
          worst = std::max(worst, max_amp_diff(bb, SparseState{}));
        }
    }
  return make_result("fock.quasi-boson-commutators", worst <= 1e-12, worst,
                     "exchange-corrected CCR for all |k|,|l| <= 2 at kf2 = 1");
}

InvariantResult fock_kinetic_commutator(const BuildOptions&, int) {
  std::mt19937_64 rng(63);
  const Momentum k{1, 0, 0};
  const ModeUniverse u = small_universe(1, 1, {k});
  const Lune lune = enumerate_lune(1, k);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SparseState s = random_state(u, rng, 2);
    for (std::size_t i = 0; i < lune.size(); ++i) {
      const Momentum p = lune.points[i];
      SparseState comm = apply_hkin_prime(apply_bdag(s, u, k, p), u);
      SparseState tmp = apply_bdag(apply_hkin_prime(s, u), u, k, p);
      tmp *= -1.0;
      comm += tmp;
      SparseState expect = apply_bdag(s, u, k, p);
      expect *= double(lune.twice_lambda[i]);
      worst = std::max(worst, max_amp_diff(comm, expect));
    }
  }
  return make_result("fock.kinetic-commutator", worst <= 1e-12, worst,
                     "[H'_kin, b*_{k,p}] = (|p|^2-|p-k|^2) b*_{k,p} on random states");
}

InvariantResult fock_particle_hole(const BuildOptions&, int) {
  std::mt19937_64 rng(64);
  const ModeUniverse u = small_universe(1, 2, {{1, 0, 0}, {1, 1, 0}});
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const SparseState s = random_state(u, rng, 3);
    worst = std::max(worst, max_amp_diff(apply_ne_particle(s, u), apply_ne_hole(s, u)));
  }
  // H'_kin psi_F = 0 and N_E psi_F = 0
  const SparseState vac = fermi_state(u);
  worst = std::max(worst, apply_hkin_prime(vac, u).norm());
  worst = std::max(worst, apply_ne_particle(vac, u).norm());
  return make_result("fock.particle-hole", worst <= 1e-12, worst,
                     "both N_E forms agree on random N-particle states");
}

InvariantResult fock_norm_recursion(const BuildOptions&, int) {
  double worst = 0.0;
  bool ok = true;
  for (std::int64_t kf2 : {1, 2}) {
    FermiSystem sys = plasmon_system(kf2, 4.0 * 3.141592653589793);
    const Momentum k{1, 0, 0};
    const PlasmonMode mode = compute_mode(sys, k);
    const Lune lune = enumerate_lune(kf2, k);
    const std::vector<double> phi = mode.phi_over_lune(lune);
    const ModeUniverse u = small_universe(kf2, sys.s, {k});
    std::vector<double> norms;  // |Psi_M|^2
    for (int M = 0; M <= 4; ++M) norms.push_back(psi_m(u, lune, phi, M).norm2());
    for (int M = 1; M <= 4; ++M) {
      const double upper = double(M) * norms[std::size_t(M - 1)];
      const double lower = double(M) *
                           (1.0 - double(M - 1) / double(sys.s) * mode.phi_inf * mode.phi_inf) *
                           norms[std::size_t(M - 1)];
      if (norms[std::size_t(M)] > upper * (1.0 + 1e-12)) ok = false;
      if (norms[std::size_t(M)] < lower * (1.0 - 1e-12) - 1e-15) ok = false;
      worst = std::max(worst, norms[std::size_t(M)] / std::max(upper, 1e-300));
    }
  }
  return make_result("fock.norm-recursion", ok, worst,
                     "M(1 - (M-1)/s |phi|_inf^2) <= |Psi_M|^2/|Psi_{M-1}|^2 <= M for M <= 4");
}

InvariantResult fock_psi_m_identity(const BuildOptions&, int) {
  FermiSystem sys = plasmon_system(1, 4.0 * 3.141592653589793);
  const Momentum k{1, 0, 0};
  const PlasmonMode mode = compute_mode(sys, k);
  const Lune lune = enumerate_lune(1, k);
  const std::vector<double> phi = mode.phi_over_lune(lune);
  const ModeUniverse u = small_universe(1, 1, {k});
  double worst = 0.0;
  for (int M = 1; M <= 3; ++M) {
    const SparseState psi = psi_m(u, lune, phi, M);
    const SparseState prev = psi_m(u, lune, phi, M - 1);
    for (int idx = 0; idx < u.size(); ++idx) {
      if (u.inside(idx)) continue;
      const Momentum p = u.momentum(idx);
      const SparseState lhs = apply_c(psi, idx);
      SparseState rhs;
      if (lune.contains(p)) {
        const std::size_t i = lune.index_of(p);
        rhs = apply_c(prev, u.index(p - k, 0));
        rhs *= double(M) * phi[i];  // s = 1
      }
      worst = std::max(worst, max_amp_diff(lhs, rhs));
    }
  }
  return make_result("fock.psi-m-identity", worst <= 1e-12, worst,
                     "c_p Psi_M = 1_{L_k}(p) M s^{-1/2} <e_p,phi> c_{p-k} Psi_{M-1}, M <= 3");
}

InvariantResult fock_residual_identity(const BuildOptions&, int) {
  FermiSystem sys = plasmon_system(1, 4.0 * 3.141592653589793);
  double worst = 0.0;
  for (int M : {1, 2, 3}) {
    const ResidualCheck chk = residual_identity_check(sys, {1, 0, 0}, M);
    if (M == 1) {
      worst = std::max(worst, chk.lhs / std::max(chk.psi_m_norm, 1e-300));
    } else {
      worst = std::max(worst, std::abs(chk.lhs - chk.rhs) / std::max(chk.lhs, 1e-12));
    }
  }
  return make_result("fock.residual-identity", worst <= 1e-9, worst,
                     "|(H_eff - M eps)Psi_M| = (2M(M-1)/s^1.5)|E Psi_{M-2}|, M in {2,3}");
}

InvariantResult fock_residual_bound(const BuildOptions&, int) {
  // strong coupling delocalizes phi enough for M = 2 at kf2 = 1
  // (|phi|_inf^-2 tends to sum(lambda)/lambda_max = 7/3 from below)
  FermiSystem sys = plasmon_system(1, 8000.0);
  const int M = 2;
  const ResidualCheck chk = residual_identity_check(sys, {1, 0, 0}, M);
  const double inv2 = 1.0 / (chk.phi_inf * chk.phi_inf);
  if (inv2 <= double(M))
    return make_result("fock.residual-bound", false, inv2, "precondition M < |phi|_inf^-2 failed");
  const double cap = 2.0 / (inv2 - double(M)) * std::sqrt(chk.hs_sum / double(sys.s * sys.s)) *
                     std::pow(double(M), 2.5);
  const double lhs = chk.lhs / chk.psi_m_norm;
  return make_result("fock.residual-bound", lhs <= cap, lhs / cap,
                     "normalized residual against the plasmon-state bound, M = 2");
}

InvariantResult fock_exchange_vacuum(const BuildOptions&, int) {
  FermiSystem sys;
  sys.kf2 = 1;
  sys.s = 1;
  sys.potential = Potential::coulomb(4.0 * 3.141592653589793);
  const Momentum k{1, 0, 0};
  const Lune lune = enumerate_lune(1, k);
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  Matrix b(lune.size(), lune.size());
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j) b(i, j) = b(j, i) = amp(rng);
  const ExchangeVacuumCheck chk = exchange_vacuum_check(sys, k, b);
  const double rel =
      std::abs(chk.direct - chk.closed_form) / std::max(std::abs(chk.closed_form), 1e-12);
  // assembly variant: B = int_0^1 B_k(t) dt from the k bundle
  const KernelBundle kb = build_kernel_bundle(sys, k);
  const ExchangeVacuumCheck chk2 = exchange_vacuum_check(sys, k, integral_b(kb));
  const double rel2 =
      std::abs(chk2.direct - chk2.closed_form) / std::max(std::abs(chk2.closed_form), 1e-12);
  const double worst = std::max(rel, rel2);
  return make_result("fock.exchange-vacuum", worst <= 1e-10, worst,
                     "<psi_F, E^2_k(B) psi_F>: second-quantized vs one-body double sum");
}

// ---------------------------------------------------------------------------

std::vector<Suite> all_suites() {
  return {
      {"lattice.exactness", lattice_exactness},
      {"lattice.lambda-positivity", lattice_lambda_positivity},
      {"lattice.partition", lattice_partition},
      {"lattice.covolume", lattice_covolume},
      {"lattice.cardinality", lattice_cardinality},
      {"riemann.slice-identity", riemann_slice_identity},
      {"riemann.beta-minus-one", riemann_beta_minus_one},
      {"riemann.regime-switch", riemann_regime_switch},
      {"riemann.bound-brackets", riemann_bound_brackets},
      {"riemann.continuum-consistency", riemann_continuum_consistency},
      {"onebody.quadrature-identities", onebody_quadrature},
      {"onebody.diagonalization-residual", onebody_diag_residual},
      {"onebody.trace-formula", onebody_trace_formula},
      {"onebody.isospectrality", onebody_isospectral},
      {"onebody.conjugation", onebody_conjugation},
      {"onebody.ordering", onebody_ordering},
      {"onebody.sign-structure", onebody_sign_structure},
      {"onebody.element-bounds", onebody_element_bounds},
      {"onebody.hs-bounds", onebody_hs_bounds},
      {"onebody.negation-symmetry", onebody_negation_symmetry},
      {"correlation.per-k-crosscheck", correlation_per_k},
      {"correlation.signs", correlation_signs},
      {"correlation.exchange-reduction", correlation_exchange_reduction},
      {"correlation.cutoff-monotonicity", correlation_cutoff_monotonicity},
      {"correlation.order-separation", correlation_order_separation},
      {"correlation.attractive-margin", correlation_attractive_margin},
      {"plasmon.eigenpair-residual", plasmon_eigen_residual},
      {"plasmon.epsilon-bounds", plasmon_epsilon_bounds},
      {"plasmon.delocalization", plasmon_delocalization},
      {"plasmon.closed-form-phi", plasmon_closed_form},
      {"plasmon.threshold", plasmon_threshold},
      {"plasmon.dispersion-trend", plasmon_dispersion_trend},
      {"fock.car", fock_car},
      {"fock.quasi-boson-commutators", fock_commutators},
      {"fock.kinetic-commutator", fock_kinetic_commutator},
      {"fock.particle-hole", fock_particle_hole},
      {"fock.norm-recursion", fock_norm_recursion},
      {"fock.psi-m-identity", fock_psi_m_identity},
      {"fock.residual-identity", fock_residual_identity},
      {"fock.residual-bound", fock_residual_bound},
      {"fock.exchange-vacuum", fock_exchange_vacuum},
  };
}

}  // namespace

VerifyReport run_verify(const RunConfig& cfg) {
  BuildOptions opts;
  if (cfg.fault == "k-sign")
    opts.flip_kernel_sign = true;
  else if (!cfg.fault.empty())
    throw ConfigError("unknown fault \"" + cfg.fault + "\" (available: k-sign)");

  VerifyReport report;
  for (const Suite& suite : all_suites()) {
    if (!cfg.only.empty() && suite.name.rfind(cfg.only, 0) != 0) continue;
    InvariantResult result;
    try {
      result = suite.run(opts, cfg.jobs);
    } catch (const Error& e) {
      result = make_result(suite.name, false, 0.0, std::string("error: ") + e.what());
    }
    report.invariants.push_back(result);
  }
  if (report.invariants.empty()) throw ConfigError("no invariant matches --only=" + cfg.only);

  // Asymptotic claims whose constants are unspecified cannot be checked at
  // finite kF; each is deliberately replaced by the property suites above.
  report.not_reproduced = {
      {"correlation-energy upper bound: the error term carries an unspecified constant",
       "error_scale is reported as a scale only; the sign, cutoff-monotonicity and "
       "order-separation suites stand in for the inequality"},
      {"effective-Hamiltonian error exponent kF^(1-1/94+eps)",
       "the many-body transformation is out of scope; the one-body conjugation U E U^T = Etilde "
       "and the element bound suite are checked instead"},
      {"plasmon-state existence bounds: constants c, c', C, C' are unspecified",
       "the explicit two-sided epsilon bounds, the eigenvector component identity, the "
       "delocalization cap and the dispersion trend are verified in their place"},
  };
  report.all_passed = true;
  for (const InvariantResult& r : report.invariants)
    if (!r.passed) report.all_passed = false;
  return report;
}

std::string render_verify(const VerifyReport& report, const RunConfig& cfg) {
  nlohmann::json j;
  j["meta"]["config"] = cfg.echo;
  j["meta"]["version"] = kToolVersion;
  nlohmann::json inv = nlohmann::json::array();
  for (const InvariantResult& r : report.invariants) {
    nlohmann::json e;
    e["name"] = r.name;
    e["passed"] = r.passed;
    e["worst"] = r.worst;
    e["detail"] = r.detail;
    inv.push_back(e);
  }
  j["invariants"] = inv;
  nlohmann::json nr = nlohmann::json::array();
  for (const NotReproduced& n : report.not_reproduced) {
    nlohmann::json e;
    e["claim"] = n.claim;
    e["replacement"] = n.replacement;
    nr.push_back(e);
  }
  j["not_reproduced"] = nr;
  j["all_passed"] = report.all_passed;
  return j.dump(2) + "\n";
}

}  // namespace fg
