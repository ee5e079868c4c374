#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/plasmon.hpp"

using namespace fg;

namespace {

FermiSystem coulomb_system(std::int64_t kf2, double g) {
  FermiSystem sys;
  sys.kf2 = kf2;
  sys.s = 1;
  sys.mean_field = false;
  sys.potential = Potential::coulomb(g);
  return sys;
}

const double kG = 4.0 * 3.141592653589793;

}  // namespace

TEST_CASE("zero coupling: no isolated mode") {
  FermiSystem sys = coulomb_system(25, 1.0);
  sys.potential = Potential::zero();
  const PlasmonMode mode = compute_mode(sys, {1, 0, 0});
  CHECK(mode.epsilon == doctest::Approx(2.0 * mode.lambda_max));
  CHECK(!mode.formula_region);
}

TEST_CASE("preconditions") {
  FermiSystem sys = coulomb_system(25, kG);
  sys.mean_field = true;
  CHECK_THROWS_AS(compute_mode(sys, {1, 0, 0}), ConfigError);
  sys.mean_field = false;
  CHECK_THROWS_AS(compute_mode(sys, {0, 0, 0}), ConfigError);
  sys.potential = Potential::from_table({{{1, 0, 0}, -0.5}});
  CHECK_THROWS_AS(compute_mode(sys, {1, 0, 0}), ConfigError);
}

TEST_CASE("epsilon bounds and eigenvector identity at kf2=1600") {
  const PlasmonMode m = compute_mode(coulomb_system(1600, kG), {1, 0, 0});
  CHECK(m.formula_region);
  CHECK(m.eigen_residual <= 1e-9);

  // lower bound holds exactly
  CHECK(m.gap_to_formula >= -1e-10 * m.epsilon);
  // upper bound with the explicit correction (threshold satisfied)
  const double lm2 = m.lambda_max * m.lambda_max;
  REQUIRE(2.0 * m.vhv > lm2);
  const double eps_var = 0.25 * m.epsilon * m.epsilon;
  const double upper = 2.0 * m.vhv + m.vh3v / m.vhv +
                       4.0 * m.vh3v * lm2 / ((2.0 * m.vhv - lm2) * (2.0 * m.vhv - lm2));
  CHECK(eps_var <= upper * (1.0 + 1e-12));

  // |phi|_inf <= 2 sqrt(<v,hv> lambda_max)/(2<v,hv>-lambda_max^2) |v|_inf
  FermiSystem sys = coulomb_system(1600, kG);
  const double v0 = std::sqrt(sys.v_entry_sq({1, 0, 0}));
  const double cap = 2.0 * std::sqrt(m.vhv * m.lambda_max) / (2.0 * m.vhv - lm2) * v0;
  CHECK(m.phi_inf <= cap * (1.0 + 1e-12));

  CHECK(m.closed_form_deviation <= 1e-8);
  CHECK(m.delocalization_ok);
}

TEST_CASE("gap to the two-term formula shrinks with kF") {
  double prev = 1e300;
  for (std::int64_t kf2 : {400, 1600, 6400}) {
    const PlasmonMode m = compute_mode(coulomb_system(kf2, kG), {1, 0, 0});
    CHECK(m.gap_to_formula >= -1e-10 * m.epsilon);
    CHECK(m.gap_to_formula / m.epsilon < prev);
    prev = m.gap_to_formula / m.epsilon;
  }
}

TEST_CASE("mode threshold") {
  CHECK(mode_threshold(coulomb_system(1600, kG), {1, 0, 0}).satisfied);
  FermiSystem weak = coulomb_system(1600, kG);
  weak.potential = Potential::zero();
  CHECK(!mode_threshold(weak, {1, 0, 0}).satisfied);
  // V_k ~ c/kF with tiny c stays below the threshold
  weak.potential = Potential::coulomb(1e-4 / weak.kf());
  CHECK(!mode_threshold(weak, {1, 0, 0}).satisfied);
}

TEST_CASE("dispersion table against the plasmon frequency formula") {
  const auto rows = dispersion_table(kG, 1, {400, 1600}, {{1, 0, 0}}, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].deviation <= 0.1);
  CHECK(rows[1].deviation <= rows[0].deviation + 1e-12);
  for (const DispersionRow& r : rows) {
    CHECK(r.epsilon > 0.0);
    CHECK(r.predicted > 0.0);
  }
}

TEST_CASE("weak-coupling limit of the dispersion row") {
  const auto rows = dispersion_table(1e-9, 1, {100}, {{1, 0, 0}}, 1);
  REQUIRE(rows.size() == 1);
  // computed epsilon collapses to 2 lambda_max; the formula-region flag drops
  const PlasmonMode m = compute_mode(coulomb_system(100, 1e-9), {1, 0, 0});
  CHECK(!rows[0].formula_region);
  CHECK(rows[0].epsilon == doctest::Approx(2.0 * m.lambda_max).epsilon(1e-9));
}

TEST_CASE("phi expands over the lune") {
  const std::int64_t kf2 = 100;
  const PlasmonMode m = compute_mode(coulomb_system(kf2, kG), {1, 0, 0});
  const Lune lune = enumerate_lune(kf2, {1, 0, 0});
  const auto phi = m.phi_over_lune(lune);
  REQUIRE(phi.size() == lune.size());
  double norm2 = 0.0, inf = 0.0;
  for (double x : phi) {
    norm2 += x * x;
    inf = std::max(inf, std::abs(x));
  }
  CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inf == doctest::Approx(m.phi_inf).epsilon(1e-12));
}
