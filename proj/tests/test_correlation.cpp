#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "core/correlation.hpp"

using namespace fg;

TEST_CASE("fermi energy: kinetic part and spin multiplicity") {
  FermiSystem sys;
  sys.kf2 = 1;
  sys.s = 1;
  sys.potential = Potential::zero();
  CHECK(fermi_energy(sys) == doctest::Approx(6.0));  // six unit vectors in the ball

  sys.s = 2;
  CHECK(fermi_energy(sys) == doctest::Approx(12.0));
}

TEST_CASE("fermi energy interaction vs occupied-pair oracle") {
  FermiSystem sys;
  sys.kf2 = 1;
  sys.s = 1;
  sys.v0hat = 0.7;
  std::map<Momentum, double> entries;
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y)
      for (int z = -2; z <= 2; ++z) {
        const Momentum k{x, y, z};
        if (!k.is_zero() && k.norm2() <= 4) entries[k] = 1.0;
      }
  sys.potential = Potential::from_table(entries);

  // direct <psi_F, H_int psi_F> over occupied pairs: (1/2(2pi)^3) sum_{(p,s)!=(q,t)}
  // (V_0 - delta_{s,t} V_{p-q})
  const FermiBall ball = enumerate_fermi_ball(sys.kf2);
  double pair_sum = 0.0;
  for (const Momentum& p : ball.points)
    for (const Momentum& q : ball.points) {
      for (int s1 = 0; s1 < sys.s; ++s1)
        for (int s2 = 0; s2 < sys.s; ++s2) {
          if (p == q && s1 == s2) continue;
          pair_sum += sys.v0hat - (s1 == s2 ? (p == q ? sys.v0hat : sys.vhat(p - q)) : 0.0);
        }
    }
  const double oracle_interaction = pair_sum / (2.0 * kTwoPiCubed);
  double kinetic = 0.0;
  for (const Momentum& p : ball.points) kinetic += double(p.norm2());
  const double oracle = kinetic * sys.s + sys.coupling_scale() * oracle_interaction;
  CHECK(fermi_energy(sys) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("e_corr_bos vanishes for zero potential and is negative otherwise") {
  FermiSystem sys;
  sys.kf2 = 9;
  sys.s = 1;
  sys.potential = Potential::zero();
  CHECK(e_corr_bos(sys, 3).total == 0.0);

  sys.potential = Potential::coulomb(1.0);
  const BosResult bos = e_corr_bos(sys, 3);
  CHECK(bos.total < 0.0);
  for (const PerKTerm& t : bos.per_k) CHECK(t.e_bos <= 0.0);
}

TEST_CASE("bosonic term growth over kF (Coulomb)") {
  auto e_at = [](std::int64_t kf2) {
    FermiSystem sys;
    sys.kf2 = kf2;
    sys.s = 1;
    sys.potential = Potential::coulomb(1.0);
    return std::abs(e_corr_bos(sys, 2 * int(std::ceil(sys.kf())), 4).total);
  };
  const double r = e_at(100) / e_at(25);
  CHECK(r >= 2.0);
  CHECK(r <= 3.5);  // consistent with kF log kF between kF = 5 and kF = 10
}

TEST_CASE("exchange sum: reduced form, oracle and denominator symmetry") {
  FermiSystem sys;
  sys.kf2 = 1;
  sys.s = 1;
  std::map<Momentum, double> entries;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y)
      for (int z = -3; z <= 3; ++z) {
        const Momentum k{x, y, z};
        if (!k.is_zero() && k.norm2() <= 9) entries[k] = 1.0;
      }
  sys.potential = Potential::from_table(entries);

  CHECK(e_corr_ex(FermiSystem{1, 1, Potential::zero(), true, 0.0}, 3) == 0.0);

  const int cutoff = 5;
  const double reduced = e_corr_ex(sys, cutoff);
  CHECK(reduced > 0.0);

  // literal quadruple sum over k, l with the delta constraint
  const FermiBall ball = enumerate_fermi_ball(sys.kf2);
  const double c = sys.coupling_scale();
  const double pref = double(sys.s) * c * c / (4.0 * kTwoPiCubed * kTwoPiCubed);
  double literal = 0.0;
  for (const Momentum& k : momentum_shell(cutoff)) {
    if (sys.vhat(k) == 0.0) continue;
    const Lune lk = lune_from_ball(ball, k);
    for (const Momentum& l : momentum_shell(cutoff + 4)) {
      if (sys.vhat(l) == 0.0) continue;
      const Lune ll = lune_from_ball(ball, l);
      for (std::size_t a = 0; a < lk.size(); ++a) {
        if (!ll.contains(lk.points[a])) continue;
        for (std::size_t b = 0; b < lk.size(); ++b) {
          if (!ll.contains(lk.points[b])) continue;
          if (!(lk.points[a] + lk.points[b] == k + l)) continue;
          // denominator symmetry under p + q = k + l, exact in integers
          const std::size_t ia = ll.index_of(lk.points[a]);
          const std::size_t ib = ll.index_of(lk.points[b]);
          CHECK(lk.twice_lambda[a] + lk.twice_lambda[b] ==
                ll.twice_lambda[ia] + ll.twice_lambda[ib]);
          literal += pref * sys.vhat(k) * sys.vhat(l) /
                     (0.5 * double(lk.twice_lambda[a] + lk.twice_lambda[b]));
        }
      }
    }
  }
  CHECK(std::abs(reduced - literal) <= 1e-12 * std::abs(literal));
}

TEST_CASE("error scale") {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::zero();
  CHECK(error_scale(sys, 5) == 0.0);

  // single mode of weight w at |k| = 1 contributes exactly w
  sys.potential = Potential::from_table({{{0, 0, 1}, 3.0}});
  CHECK(error_scale(sys, 2) == doctest::Approx(std::sqrt(2.0 * 9.0)));  // k and -k both count

  sys.potential = Potential::coulomb(1.0);
  double prev = 0.0;
  for (std::int64_t kf2 : {25, 100, 400}) {
    sys.kf2 = kf2;
    const double scale = error_scale(sys, 4 * int(std::ceil(sys.kf())));
    CHECK(scale > prev);  // sqrt(log kF) growth with the unbounded-cutoff proxy
    prev = scale;
  }
}

TEST_CASE("cutoff monotonicity of |e_bos|") {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  double prev = 0.0;
  for (int cutoff : {1, 2, 3, 4}) {
    const double e = std::abs(e_corr_bos(sys, cutoff).total);
    CHECK(e >= prev - 1e-15);
    prev = e;
  }
}

TEST_CASE("attractive sweep margins") {
  const double eps = 0.4;
  FermiSystem sys;
  sys.kf2 = 2500;
  sys.s = 1;
  const double val = -(1.0 - eps) * 4.0 * 9.869604401089358;
  sys.potential = Potential::from_table({{{1, 0, 0}, val}, {{0, 1, 0}, val}, {{0, 0, 1}, val}});

  const auto margins = attractive_sweep(sys, eps, 1);
  REQUIRE(margins.size() == 6);
  for (const AttractiveMargin& m : margins) {
    CHECK(m.attractive);
    CHECK(!m.flagged);
    CHECK(std::abs(m.margin - eps) <= 0.15);
  }

  // repulsive system: all margins are the +inf marker
  sys.potential = Potential::coulomb(1.0);
  for (const AttractiveMargin& m : attractive_sweep(sys, eps, 1))
    CHECK(m.margin == std::numeric_limits<double>::infinity());

  // 20% past the borderline must be flagged
  sys.potential = Potential::from_table({{{1, 0, 0}, -4.0 * 9.869604401089358 * 1.2}});
  bool flagged = false;
  for (const AttractiveMargin& m : attractive_sweep(sys, eps, 1))
    if (m.attractive && m.flagged) flagged = true;
  CHECK(flagged);

  CHECK_THROWS_AS(attractive_sweep(sys, 1.5, 1), ConfigError);
}

TEST_CASE("inadmissible mode interrupts the bos sweep naming k") {
  FermiSystem sys;
  sys.kf2 = 2500;
  sys.s = 1;
  sys.potential = Potential::from_table({{{1, 0, 0}, -4.0 * 9.869604401089358 * 1.2}});
  CHECK_THROWS_AS(e_corr_bos(sys, 1), AdmissibilityError);
}

TEST_CASE("correlation report carries the bosonic tail scale") {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  const CorrelationReport rep = correlation_report(sys, 3, 2);
  CHECK(rep.bos_tail_scale > 0.0);  // Coulomb support extends past the cutoff
  CHECK(rep.e_bos < 0.0);
  CHECK(rep.e_ex > 0.0);
  // per-k breakdown carries the exchange share inside the ex cutoff
  bool has_ex = false;
  for (const PerKTerm& t : rep.per_k)
    if (t.e_ex > 0.0) has_ex = true;
  CHECK(has_ex);

  sys.potential = Potential::from_table({{{1, 0, 0}, 1.0}});
  const CorrelationReport covered = correlation_report(sys, 11, 2);
  CHECK(covered.bos_tail_scale == 0.0);  // cutoff already covers the support
}

TEST_CASE("default cutoff") {
  FermiSystem sys;
  sys.kf2 = 25;
  sys.s = 1;
  sys.potential = Potential::coulomb(1.0);
  CHECK(default_cutoff(sys) == 10);
  sys.potential = Potential::from_table({{{3, 0, 0}, 1.0}});
  CHECK(default_cutoff(sys) == 13);
}
