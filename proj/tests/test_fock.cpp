#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/fock.hpp"

using namespace fg;

namespace {

ModeUniverse universe_for(std::int64_t kf2, int s, const std::vector<Momentum>& ks) {
  std::set<Momentum> momenta;
  for (const Momentum& p : enumerate_fermi_ball(kf2).points) momenta.insert(p);
  for (const Momentum& k : ks)
    for (const Momentum& p : enumerate_lune(kf2, k).points) momenta.insert(p);
  return ModeUniverse(kf2, s, momenta);
}

FermiSystem unscaled(std::int64_t kf2, double g, int s = 1) {
  FermiSystem sys;
  sys.kf2 = kf2;
  sys.s = s;
  sys.mean_field = false;
  sys.potential = Potential::coulomb(g);
  return sys;
}

const double kG = 4.0 * 3.141592653589793;

}  // namespace

TEST_CASE("mask bit bookkeeping across both words") {
  Mask m;
  m.set(3);
  m.set(70);
  CHECK(m.test(3));
  CHECK(m.test(70));
  CHECK(!m.test(71));
  CHECK(m.popcount() == 2);
  CHECK(m.popcount_below(70) == 1);
  CHECK(m.popcount_below(71) == 2);
  m.clear(70);
  CHECK(!m.test(70));
}

TEST_CASE("fermi state and CAR basics") {
  const ModeUniverse u = universe_for(1, 1, {{1, 0, 0}});
  const SparseState vac = fermi_state(u);
  REQUIRE(vac.amp.size() == 1);
  CHECK(vac.amp.begin()->first.popcount() == 7);
  CHECK(u.num_particles() == 7);

  // c_p psi_F = 0 outside, c*_q psi_F = 0 inside
  for (int i = 0; i < u.size(); ++i) {
    if (u.inside(i))
      CHECK(apply_cdag(vac, i).empty());
    else
      CHECK(apply_c(vac, i).empty());
  }

  // c_i c*_i on an empty mode returns the state
  const int outside = u.index({2, 0, 0}, 0);
  const SparseState round = apply_c(apply_cdag(vac, outside), outside);
  CHECK(max_amp_diff(round, vac) == 0.0);

  CHECK(apply_hkin_prime(vac, u).empty());
  CHECK(apply_ne_particle(vac, u).empty());
  CHECK(apply_ne_hole(vac, u).empty());
}

TEST_CASE("universe capacity and closure errors") {
  std::set<Momentum> too_many;
  for (int x = 0; x < 11; ++x)
    for (int y = 0; y < 12; ++y) too_many.insert({x, y, 7});
  CHECK_THROWS_AS(ModeUniverse(1, 1, too_many), ClosureError);

  const ModeUniverse u = universe_for(1, 1, {{1, 0, 0}});
  CHECK_THROWS_AS(u.index({5, 5, 5}, 0), ClosureError);
  const SparseState vac = fermi_state(u);
  CHECK_THROWS_AS(apply_b(vac, u, {5, 5, 5}, {6, 5, 5}), ClosureError);
}

TEST_CASE("excitation operator annihilates the vacuum correctly") {
  const ModeUniverse u = universe_for(1, 1, {{1, 0, 0}});
  const Lune lune = enumerate_lune(1, {1, 0, 0});
  const SparseState vac = fermi_state(u);
  for (const Momentum& p : lune.points) {
    CHECK(apply_b(vac, u, {1, 0, 0}, p).empty());
    const SparseState exc = apply_bdag(vac, u, {1, 0, 0}, p);
    CHECK(exc.norm() == doctest::Approx(1.0));
    // single excitation: N_E eigenvalue 1, H'_kin eigenvalue |p|^2 - |p-k|^2
    CHECK(max_amp_diff(apply_ne_particle(exc, u), exc) <= 1e-15);
    SparseState kin = exc;
    kin *= double(p.norm2() - (p - Momentum{1, 0, 0}).norm2());
    CHECK(max_amp_diff(apply_hkin_prime(exc, u), kin) <= 1e-15);
  }
}

TEST_CASE("psi_M basics") {
  FermiSystem sys = unscaled(1, kG);
  const Momentum k{1, 0, 0};
  const PlasmonMode mode = compute_mode(sys, k);
  const Lune lune = enumerate_lune(1, k);
  const std::vector<double> phi = mode.phi_over_lune(lune);
  const ModeUniverse u = universe_for(1, 1, {k});

  const SparseState psi0 = psi_m(u, lune, phi, 0);
  CHECK(max_amp_diff(psi0, fermi_state(u)) == 0.0);
  CHECK(psi_m(u, lune, phi, 1).norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(psi_m(u, lune, phi, -1), ConfigError);
}

TEST_CASE("H_eff with zero potential reduces to H'_kin") {
  FermiSystem sys = unscaled(1, kG);
  FermiSystem zero = sys;
  zero.potential = Potential::zero();
  const Momentum k{1, 0, 0};
  const ModeUniverse u = universe_for(1, 1, psi_m_transfer_set(1, k));
  std::map<Momentum, KernelBundle> store;
  std::map<Momentum, const KernelBundle*> bundles;
  for (const Momentum& l : psi_m_transfer_set(1, k)) {
    store.emplace(l, build_kernel_bundle(zero, l));
    bundles[l] = &store.at(l);
  }
  const Lune lune = enumerate_lune(1, k);
  const PlasmonMode mode = compute_mode(sys, k);
  const SparseState psi = psi_m(u, lune, mode.phi_over_lune(lune), 2);
  const SparseState heff = apply_heff(psi, u, bundles);
  CHECK(max_amp_diff(heff, apply_hkin_prime(psi, u)) <= 1e-12);
}

TEST_CASE("H_eff errors on a missing contributing transfer") {
  FermiSystem sys = unscaled(1, kG);
  const Momentum k{1, 0, 0};
  const ModeUniverse u = universe_for(1, 1, psi_m_transfer_set(1, k));
  const Lune lune = enumerate_lune(1, k);
  const PlasmonMode mode = compute_mode(sys, k);
  const SparseState psi = psi_m(u, lune, mode.phi_over_lune(lune), 2);
  std::map<Momentum, const KernelBundle*> empty;
  CHECK_THROWS_AS(apply_heff(psi, u, empty), ClosureError);
}

TEST_CASE("Psi_1 is an exact eigenstate of H_eff") {
  FermiSystem sys = unscaled(1, kG);
  const ResidualCheck chk = residual_identity_check(sys, {1, 0, 0}, 1);
  CHECK(chk.rhs == 0.0);  // Psi_{-1} = 0
  CHECK(chk.lhs <= 1e-10 * chk.psi_m_norm);
}

TEST_CASE("residual identity for M in {2,3}") {
  FermiSystem sys = unscaled(1, kG);
  for (int M : {2, 3}) {
    const ResidualCheck chk = residual_identity_check(sys, {1, 0, 0}, M);
    CHECK(chk.lhs > 0.0);
    CHECK(std::abs(chk.lhs - chk.rhs) <= 1e-9 * std::max(chk.lhs, 1e-12));
  }
}

TEST_CASE("residual identity keeps the spin factors straight at s = 2") {
  FermiSystem sys = unscaled(1, kG, 2);
  const ResidualCheck chk = residual_identity_check(sys, {1, 0, 0}, 2);
  CHECK(chk.lhs > 0.0);
  CHECK(std::abs(chk.lhs - chk.rhs) <= 1e-9 * std::max(chk.lhs, 1e-12));
}

TEST_CASE("norm sandwich at kf2 in {1,2}") {
  for (std::int64_t kf2 : {1, 2}) {
    FermiSystem sys = unscaled(kf2, kG);
    const Momentum k{1, 0, 0};
    const PlasmonMode mode = compute_mode(sys, k);
    const Lune lune = enumerate_lune(kf2, k);
    const std::vector<double> phi = mode.phi_over_lune(lune);
    const ModeUniverse u = universe_for(kf2, 1, {k});
    double prev = 1.0;
    for (int M = 1; M <= 4; ++M) {
      const double cur = psi_m(u, lune, phi, M).norm2();
      CHECK(cur <= double(M) * prev * (1.0 + 1e-12));
      CHECK(cur >= double(M) * (1.0 - double(M - 1) * mode.phi_inf * mode.phi_inf) * prev -
                       1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("exchange vacuum expectation: zero B and random B") {
  FermiSystem sys;
  sys.kf2 = 1;
  sys.s = 1;
  sys.potential = Potential::coulomb(kG);
  const Momentum k{1, 0, 0};
  const Lune lune = enumerate_lune(1, k);

  const Matrix zero = Matrix::Zero(lune.size(), lune.size());
  const ExchangeVacuumCheck z = exchange_vacuum_check(sys, k, zero);
  CHECK(z.direct == 0.0);
  CHECK(z.closed_form == 0.0);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  Matrix b(lune.size(), lune.size());
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j) b(i, j) = b(j, i) = amp(rng);
  const ExchangeVacuumCheck chk = exchange_vacuum_check(sys, k, b);
  CHECK(chk.closed_form != 0.0);
  CHECK(std::abs(chk.direct - chk.closed_form) <= 1e-10 * std::abs(chk.closed_form));
}

TEST_CASE("kinetic operator dominates the excitation number in expectation") {
  std::mt19937_64 rng(11);
  const ModeUniverse u = universe_for(1, 1, {{1, 0, 0}, {1, 1, 0}});
  const SparseState vac = fermi_state(u);
  std::vector<int> inside, outside;
  for (int i = 0; i < u.size(); ++i) (u.inside(i) ? inside : outside).push_back(i);
  std::uniform_int_distribution<std::size_t> hp(0, inside.size() - 1), pp(0, outside.size() - 1);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    SparseState s;
    for (int t = 0; t < 3; ++t) {
      SparseState part = vac;
      for (int e = 0; e < t; ++e)
        part = apply_cdag(apply_c(part, inside[hp(rng)]), outside[pp(rng)]);
      part *= amp(rng);
      s += part;
    }
    s.prune();
    if (s.empty()) continue;
    CHECK(inner(s, apply_hkin_prime(s, u)) >= inner(s, apply_ne_particle(s, u)) - 1e-12);
  }
}

TEST_CASE("H_eff annihilates the Fermi state") {
  const ModeUniverse u = universe_for(1, 1, {{1, 0, 0}});
  const SparseState vac = fermi_state(u);
  std::map<Momentum, const KernelBundle*> none;  // no transfers contribute
  CHECK(apply_heff(vac, u, none).empty());
}

TEST_CASE("spin-resolved particle-hole symmetry at s = 2") {
  std::mt19937_64 rng(10);
  const ModeUniverse u = universe_for(1, 2, {{1, 0, 0}});
  const SparseState vac = fermi_state(u);
  CHECK(u.num_particles() == 14);
  // excite a couple of pairs and compare both N_E forms
  SparseState state = apply_cdag(apply_c(vac, u.index({0, 0, 1}, 1)), u.index({1, 1, 0}, 1));
  state += vac;
  CHECK(max_amp_diff(apply_ne_particle(state, u), apply_ne_hole(state, u)) == 0.0);

  // quasi-bosonic commutator keeps the 1/s normalization: [b_{k,p}, b*_{k,p}]
  // on the Fermi state has no exchange part, so the expectation is exactly 1
  const Momentum k{1, 0, 0};
  for (const Momentum& p : enumerate_lune(1, k).points) {
    SparseState comm = apply_b(apply_bdag(vac, u, k, p), u, k, p);
    CHECK(inner(vac, comm) == doctest::Approx(1.0).epsilon(1e-14));
  }

  // number operators reject particle-number violations
  const SparseState broken = apply_c(vac, u.index({0, 0, 0}, 0));
  CHECK_THROWS_AS(apply_ne_particle(broken, u), Error);
  CHECK_THROWS_AS(apply_hkin_prime(broken, u), Error);
}
