#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "core/geometry.hpp"

using namespace fg;

TEST_CASE("fermi ball enumeration") {
  const FermiBall b1 = enumerate_fermi_ball(1);
  CHECK(b1.size() == 7);
  std::set<Momentum> pts(b1.points.begin(), b1.points.end());
  CHECK(pts.count({0, 0, 0}) == 1);
  CHECK(pts.count({1, 0, 0}) == 1);
  CHECK(pts.count({0, -1, 0}) == 1);

  CHECK(enumerate_fermi_ball(4).size() == 33);
  CHECK_THROWS_AS(enumerate_fermi_ball(0), ConfigError);
  CHECK(std::is_sorted(b1.points.begin(), b1.points.end()));
}

TEST_CASE("lune at kf2=1, k=(1,0,0)") {
  const Lune lune = enumerate_lune(1, {1, 0, 0});
  REQUIRE(lune.size() == 5);
  std::multiset<std::int64_t> lams(lune.twice_lambda.begin(), lune.twice_lambda.end());
  CHECK(lams == std::multiset<std::int64_t>{1, 1, 1, 1, 3});
  CHECK(lune.lambda_min() == 0.5);
  CHECK(lune.lambda_max() == 1.5);
}

TEST_CASE("lune degenerates to the translated ball for |k| > 2kF") {
  const Momentum k{9, 0, 0};
  const Lune lune = enumerate_lune(1, k);
  REQUIRE(lune.size() == 7);
  // lambda_{k,p} = k.p - |k|^2/2 for every point of the shifted ball
  for (std::size_t i = 0; i < lune.size(); ++i)
    CHECK(lune.twice_lambda[i] == 2 * k.dot(lune.points[i]) - k.norm2());
}

TEST_CASE("lune rejects k = 0") { CHECK_THROWS_AS(enumerate_lune(1, {0, 0, 0}), ConfigError); }

TEST_CASE("L_k = (B_F + k) \\ B_F and is disjoint from B_F") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> kf2_dist(1, 120), kc(-4, 4);
  for (int trial = 0; trial < 15; ++trial) {
    const std::int64_t kf2 = kf2_dist(rng);
    Momentum k{kc(rng), kc(rng), kc(rng)};
    if (k.is_zero()) k = {1, 1, 0};
    const FermiBall ball = enumerate_fermi_ball(kf2);
    const Lune lune = enumerate_lune(kf2, k);
    const Lune translated = lune_from_ball(ball, k);
    CHECK(lune.points == translated.points);
    CHECK(lune.twice_lambda == translated.twice_lambda);
    for (const Momentum& p : lune.points) CHECK(p.norm2() > kf2);
    auto hist = lambda_histogram(ball, k);
    std::int64_t total = 0;
    for (auto& [tl, c] : hist) total += c;
    CHECK(total == std::int64_t(lune.size()));
    CHECK(count_lune(kf2, k) == std::int64_t(lune.size()));
  }
}

TEST_CASE("slices partition the lune with the right plane values") {
  const Lune lune = enumerate_lune(1, {1, 0, 0});
  const auto slices = lune_slices(lune);
  REQUIRE(slices.size() == 2);
  CHECK(slices[0].m == 1);
  CHECK(slices[0].points.size() == 4);
  CHECK(slices[1].m == 2);
  CHECK(slices[1].points.size() == 1);
  for (const LuneSlice& s : slices)
    for (const Momentum& p : s.points) CHECK(lune.k.dot(p) == gcd3(lune.k) * s.m);
}

TEST_CASE("slice keys follow gcd spacing") {
  const Momentum k{2, 0, 0};
  const Lune lune = enumerate_lune(4, k);
  for (const LuneSlice& s : lune_slices(lune)) {
    CHECK(s.dot_value == 2 * s.m);  // gcd = 2
    for (const Momentum& p : s.points) CHECK(k.dot(p) == 2 * s.m);
  }
  std::size_t total = 0;
  for (const LuneSlice& s : lune_slices(lune)) total += s.points.size();
  CHECK(total == lune.size());
}

TEST_CASE("perpendicular lattice generators") {
  const auto [a1, a2] = find_perp_generators({1, 0, 0});
  CHECK(a1.dot(Momentum{1, 0, 0}) == 0);
  CHECK(a2.dot(Momentum{1, 0, 0}) == 0);
  CHECK(a1.norm2() == 1);
  CHECK(a2.norm2() == 1);
  CHECK(a1.norm2() * a2.norm2() - a1.dot(a2) * a1.dot(a2) == 1);

  const auto [b1, b2] = find_perp_generators({1, 1, 0});
  const std::int64_t gram = b1.norm2() * b2.norm2() - b1.dot(b2) * b1.dot(b2);
  CHECK(gram == 2);  // l^-2 = |k|^2/gcd^2 = 2

  // the lattice depends on the direction only; (2,2,0) gives the same plane
  const auto [c1, c2] = find_perp_generators({2, 2, 0});
  CHECK(c1 == b1);
  CHECK(c2 == b2);
}

TEST_CASE("covolume identity for all small k") {
  for (int x = -5; x <= 5; ++x)
    for (int y = -5; y <= 5; ++y)
      for (int z = 0; z <= 5; ++z) {
        const Momentum k{x, y, z};
        if (k.is_zero()) continue;
        const auto [v1, v2] = find_perp_generators(k);
        const std::int64_t g = gcd3(k);
        CHECK(k.dot(v1) == 0);
        CHECK(k.dot(v2) == 0);
        CHECK((v1.norm2() * v2.norm2() - v1.dot(v2) * v1.dot(v2)) * g * g == k.norm2());
      }
}

TEST_CASE("slice ellipse report") {
  const Momentum k{1, 0, 0};
  const Lune lune = enumerate_lune(100, k);
  const auto gens = find_perp_generators(k);
  const auto reports = slice_ellipse_report(lune, gens);
  REQUIRE(!reports.empty());

  std::map<std::int64_t, std::int64_t> exact;
  for (const LuneSlice& s : lune_slices(lune)) exact[s.m] = std::int64_t(s.points.size());
  std::int64_t covered = 0;
  for (const SliceCountReport& r : reports) {
    auto it = exact.find(r.m);
    CHECK(r.exact_count == (it == exact.end() ? 0 : it->second));
    if (it != exact.end()) ++covered;
    CHECK(r.ellipse_area >= 0.0);
    CHECK(r.radii_ratio_bound >= 1.0);
  }
  CHECK(covered == std::int64_t(exact.size()));

  // the frontmost plane is too thin for pointwise agreement (12 lattice
  // points on y^2+z^2 = 100 against an annulus of area pi); the widest slice
  // is within 15%
  const SliceCountReport widest = *std::max_element(
      reports.begin(), reports.end(),
      [](const SliceCountReport& a, const SliceCountReport& b) { return a.ellipse_area < b.ellipse_area; });
  CHECK(std::abs(double(widest.exact_count) - widest.ellipse_area) <= 0.15 * widest.ellipse_area);

  // a plane beyond both spheres carries no area
  CHECK(ellipse_slice_area(100, k, 1000) == 0.0);

  // generator validation: non-orthogonal pair is rejected
  CHECK_THROWS_AS(slice_ellipse_report(lune, {Momentum{1, 0, 0}, Momentum{0, 1, 0}}), ConfigError);
  // wrong covolume (proper sublattice) is rejected
  CHECK_THROWS_AS(slice_ellipse_report(lune, {Momentum{0, 2, 0}, Momentum{0, 0, 1}}), ConfigError);
}

TEST_CASE("slice counts track areas as kF grows") {
  const Momentum k{1, 0, 0};
  double prev_ratio = 1e300;
  for (std::int64_t kf2 : {400, 2500, 10000}) {
    const Lune lune = lune_from_ball(enumerate_fermi_ball(kf2), k);
    double worst = 0.0, biggest = 0.0;
    for (const SliceCountReport& r : slice_ellipse_report(lune, find_perp_generators(k))) {
      worst = std::max(worst, std::abs(double(r.exact_count) - r.ellipse_area));
      biggest = std::max(biggest, r.ellipse_area);
    }
    const double ratio = worst / biggest;
    CHECK(ratio < 0.35);
    CHECK(ratio < prev_ratio * 1.5);  // remainder stays subdominant as kF grows
    prev_ratio = ratio;
  }
}

TEST_CASE("cardinality bound over the grid") {
  for (std::int64_t kf2 : {1, 9, 64, 225, 400})
    for (const Momentum& k :
         {Momentum{1, 0, 0}, Momentum{2, 1, 0}, Momentum{3, 3, 3}, Momentum{6, 0, 0}}) {
      const double kf = std::sqrt(double(kf2));
      const double cap = 20.0 * std::min(kf * kf * std::sqrt(double(k.norm2())), kf * kf * kf);
      CHECK(double(count_lune(kf2, k)) <= cap);
    }
}
