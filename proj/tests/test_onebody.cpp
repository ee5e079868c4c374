#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/kernel.hpp"
#include "core/operators.hpp"
#include "core/riemann.hpp"

using namespace fg;

namespace {

Matrix random_spd(std::mt19937_64& rng, int n, double shift = 0.5) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  return Matrix(a * a.transpose()) + shift * Matrix::Identity(n, n);
}

Vector random_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("sym_func basics") {
  std::mt19937_64 rng(1);
  const Matrix a = random_spd(rng, 12);
  CHECK(max_abs(Matrix(sym_func(a, [](double x) { return x; }) - a)) < 1e-12 * max_abs(a));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const Matrix r = sym_sqrt(d);
  CHECK(r(0, 0) == doctest::Approx(2.0));
  CHECK(r(1, 1) == doctest::Approx(3.0));

  // exp then log roundtrip
  for (int n : {5, 20, 50}) {
    const Matrix spd = random_spd(rng, n);
    const Matrix back = sym_exp(sym_log(spd));
    CHECK(max_abs(Matrix(back - spd)) < 1e-9 * max_abs(spd));
  }

  // log rejects non-positive spectra and names the eigenvalue
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -3.0;
  CHECK_THROWS_WITH_AS(sym_log(neg), doctest::Contains("-3"), Error);
}

TEST_CASE("sherman-morrison") {
  std::mt19937_64 rng(2);
  const int n = 20;
  const Matrix a = random_spd(rng, n);
  const Matrix ainv = a.inverse();
  const Vector w = random_vec(rng, n, -1.0, 1.0);

  CHECK(max_abs(Matrix(sherman_morrison(ainv, 0.0, w) - ainv)) == 0.0);

  const double g = 2.0;
  const Matrix direct = Matrix(a + g * (w * w.transpose())).inverse();
  CHECK(max_abs(Matrix(sherman_morrison(ainv, g, w) - direct)) < 1e-9 * max_abs(direct));

  // designed singularity: g with 1 + g<w, A^-1 w> = 0
  const double sing = -1.0 / w.dot(ainv * w);
  CHECK_THROWS_AS(sherman_morrison(ainv, sing, w), Error);
}

TEST_CASE("rank-one square root integral representation") {
  std::mt19937_64 rng(3);
  const int n = 10;
  const Matrix a = random_spd(rng, n, 1.0);
  const Vector w = random_vec(rng, n, -1.0, 1.0);

  CHECK(max_abs(Matrix(rank_one_sqrt(a, 0.0, w) - sym_sqrt(a))) < 1e-9 * max_abs(a));

  const double g = 1.0;
  const Matrix via_integral = rank_one_sqrt(a, g, w);
  const Matrix via_spectral = sym_sqrt(Matrix(a + g * (w * w.transpose())));
  CHECK(max_abs(Matrix(via_integral - via_spectral)) < 1e-7 * max_abs(via_spectral));

  // trace form
  const double inc = rank_one_sqrt_trace_increment(a, g, w);
  const double direct = via_spectral.trace() - sym_sqrt(a).trace();
  CHECK(std::abs(inc - direct) < 1e-7 * std::max(std::abs(direct), 1e-12));

  // non-PD perturbation is rejected
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector ground = es.eigenvectors().col(0);
  const double gneg = -(es.eigenvalues()[0] + 0.5);
  CHECK_THROWS_AS(rank_one_sqrt(a, gneg, ground), Error);
}

TEST_CASE("kernel bundle with zero potential") {
  FermiSystem sys;
  sys.kf2 = 4;
  sys.s = 1;
  sys.potential = Potential::zero();
  const KernelBundle b = build_kernel_bundle(sys, {1, 0, 0});
  CHECK(b.sign == 0);
  CHECK(max_abs(b.K) < 1e-13);
  CHECK(max_abs(Matrix(b.Etilde - b.h())) < 1e-12);
  CHECK(max_abs(Matrix(b.E - b.h())) < 1e-12);
  CHECK(max_abs(Matrix(b.U - Matrix::Identity(b.lambda.size(), b.lambda.size()))) < 1e-12);
  const TraceCheck chk = trace_formula_check(b);
  CHECK(std::abs(chk.lhs) < 1e-14);
  CHECK(std::abs(chk.rhs) < 1e-14);
}

TEST_CASE("diagonalization residual on random repulsive instances") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    std::uniform_int_distribution<int> dim(3, 40);
    const int n = dim(rng);
    Vector lam = random_vec(rng, n, 0.5, 25.0);
    Vector v = random_vec(rng, n, 0.0, 1.0);
    const KernelBundle b = build_kernel_bundle_raw(lam, v, 1);
    CHECK(diagonalization_residual(b) <= 1e-9 * lam.maxCoeff());
    const TraceCheck chk = trace_formula_check(b);
    CHECK(std::abs(chk.lhs - chk.rhs) <= 1e-7 * std::max(std::abs(chk.lhs), 1e-12));
  }
}

TEST_CASE("admissibility crossing") {
  // place the crossing by computing sum 1/lambda directly; the admissibility
  // gate fires before any dense matrix work, so the large-kF throwing side is
  // cheap while the admissible side is exercised at desk scale
  for (std::int64_t kf2 : {36, 2500}) {
    FermiSystem base;
    base.kf2 = kf2;
    base.s = 1;
    const auto hist = lambda_histogram(enumerate_fermi_ball(kf2), {1, 0, 0});
    double sum_inv = 0.0;
    for (const auto& [tl, c] : hist) sum_inv += double(c) / (0.5 * double(tl));
    const double critical = -kTwoPiCubed / (sum_inv / base.kf());

    FermiSystem bad = base;
    bad.potential = Potential::from_table({{{1, 0, 0}, 1.01 * critical}});
    CHECK_THROWS_AS(build_kernel_bundle(bad, {1, 0, 0}), AdmissibilityError);

    if (kf2 <= 36) {
      FermiSystem good = base;
      good.potential = Potential::from_table({{{1, 0, 0}, 0.99 * critical}});
      const KernelBundle b = build_kernel_bundle(good, {1, 0, 0});
      CHECK(b.admissible);
      CHECK(b.admissibility_margin > 0.0);
    }
  }
}

TEST_CASE("trace formula on lattice instances, both signs") {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  const KernelBundle rep = build_kernel_bundle(sys, {1, 0, 0});
  const TraceCheck r = trace_formula_check(rep);
  CHECK(std::abs(r.lhs - r.rhs) <= 1e-7 * std::abs(r.lhs));
  CHECK(r.lhs < 0.0);

  sys.potential = Potential::from_table({{{1, 0, 0}, -1.0}});
  const KernelBundle att = build_kernel_bundle(sys, {1, 0, 0});
  const TraceCheck a = trace_formula_check(att);
  CHECK(std::abs(a.lhs - a.rhs) <= 1e-7 * std::max(std::abs(a.lhs), 1e-12));
  CHECK(a.lhs < 0.0);  // F <= 0 either way
}

TEST_CASE("interpolants endpoints and integral band") {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  const KernelBundle b = build_kernel_bundle(sys, {1, 0, 0});
  const double hmax = b.lambda.maxCoeff();

  const Interpolants at0 = interpolants(b, 0.0);
  CHECK(max_abs(Matrix(at0.b - b.p_op())) < 1e-13 * hmax);  // B(0) = sign P_v
  CHECK(max_abs(Matrix(at0.a - b.p_op())) < 1e-13 * hmax);  // A(0) = P_v from the formula
  const Interpolants at1 = interpolants(b, 1.0);
  CHECK(max_abs(at1.b) <= 1e-9 * hmax);  // diagonalization condition

  // 21-node integral sits in the band around P_v/2
  const Matrix ib = integral_b(b);
  const double d = b.vhinv;
  for (Eigen::Index i = 0; i < ib.rows(); ++i)
    for (Eigen::Index j = 0; j < ib.cols(); ++j) {
      const double vv = b.v[i] * b.v[j];
      CHECK(std::abs(ib(i, j) - 0.5 * vv) <= (6.0 + d) * d * vv + 1e-15);
    }
}

TEST_CASE("element bound families hold on lattice instances") {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  for (const BoundReport& rep : verify_element_bounds(build_kernel_bundle(sys, {1, 0, 0})))
    CHECK_MESSAGE(rep.max_violation <= 1e-10, rep.bound_name);

  sys.potential = Potential::from_table({{{1, 0, 0}, -1.0}});
  for (const BoundReport& rep : verify_element_bounds(build_kernel_bundle(sys, {1, 0, 0})))
    CHECK_MESSAGE(rep.max_violation <= 1e-10, rep.bound_name);
}

TEST_CASE("hs norms inequality") {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  const KernelBundle b = build_kernel_bundle(sys, {1, 0, 0});
  const HsNorms h = hs_norms(b);
  CHECK(h.inequality_holds);
  CHECK(h.margin > 0.0);
  CHECK(h.k_hs > 0.0);
  // the 2<v,hv> branch holds for both signs
  double vhv = 0.0;
  for (Eigen::Index i = 0; i < b.lambda.size(); ++i) vhv += b.v[i] * b.v[i] * b.lambda[i];
  CHECK(h.etilde_minus_h_hs * h.etilde_minus_h_hs <= 2.0 * vhv + 1e-12);

  sys.potential = Potential::zero();
  const HsNorms z = hs_norms(build_kernel_bundle(sys, {1, 0, 0}));
  CHECK(z.k_hs < 1e-12);
  CHECK(z.etilde_minus_h_hs < 1e-12);
}

TEST_CASE("isospectrality, conjugation and ordering") {
  std::mt19937_64 rng(5);
  const KernelBundle b =
      build_kernel_bundle_raw(random_vec(rng, 25, 0.5, 20.0), random_vec(rng, 25, 0.0, 1.0), 1);
  Eigen::SelfAdjointEigenSolver<Matrix> ee(b.E), et(b.Etilde);
  for (Eigen::Index i = 0; i < 25; ++i)
    CHECK(std::abs(ee.eigenvalues()[i] - et.eigenvalues()[i]) <=
          1e-9 * std::abs(et.eigenvalues()[i]));
  CHECK(max_abs(Matrix(b.U * b.E * b.U.transpose() - b.Etilde)) <= 1e-8 * b.lambda.maxCoeff());
  Eigen::SelfAdjointEigenSolver<Matrix> diff(Matrix(b.Etilde - b.h()));
  CHECK(diff.eigenvalues().minCoeff() >= -1e-10 * b.lambda.maxCoeff());
  CHECK((-b.K).minCoeff() >= -1e-12);
}
