#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <unordered_map>

namespace fg {

std::string to_string(const Momentum& p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + "," + std::to_string(p.z) + ")";
}

double Lune::lambda_min() const {
  std::int64_t m = twice_lambda.empty() ? 0 : *std::min_element(twice_lambda.begin(), twice_lambda.end());
  return 0.5 * double(m);
}

double Lune::lambda_max() const {
  std::int64_t m = twice_lambda.empty() ? 0 : *std::max_element(twice_lambda.begin(), twice_lambda.end());
  return 0.5 * double(m);
}

bool Lune::contains(const Momentum& p) const {
  return std::binary_search(points.begin(), points.end(), p);
}

std::size_t Lune::index_of(const Momentum& p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.end() || !(*it == p))
    throw Error("momentum " + to_string(p) + " not in lune L_" + to_string(k));
  return std::size_t(it - points.begin());
}

std::int64_t gcd3(const Momentum& k) {
  return std::gcd(std::gcd(std::abs(k.x), std::abs(k.y)), std::int64_t(std::abs(k.z)));
}

static int iceil_sqrt(std::int64_t n) {
  int r = int(std::ceil(std::sqrt(double(n))));
  while (std::int64_t(r) * r < n) ++r;
  while (r > 0 && std::int64_t(r - 1) * (r - 1) >= n) --r;
  return r;
}

FermiBall enumerate_fermi_ball(std::int64_t kf2) {
  if (kf2 < 1) throw ConfigError("kf2 must be a positive integer, got " + std::to_string(kf2));
  FermiBall ball;
  ball.kf2 = kf2;
  const int R = iceil_sqrt(kf2);
  for (int x = -R; x <= R; ++x) {
    const std::int64_t x2 = std::int64_t(x) * x;
    if (x2 > kf2) continue;
    for (int y = -R; y <= R; ++y) {
      const std::int64_t xy2 = x2 + std::int64_t(y) * y;
      if (xy2 > kf2) continue;
      int zm = int(std::sqrt(double(kf2 - xy2)));
      while (xy2 + std::int64_t(zm + 1) * (zm + 1) <= kf2) ++zm;
      while (zm > 0 && xy2 + std::int64_t(zm) * zm > kf2) --zm;
      for (int z = -zm; z <= zm; ++z) ball.points.push_back({x, y, z});
    }
  }
  std::sort(ball.points.begin(), ball.points.end());
  return ball;
}

Lune enumerate_lune(std::int64_t kf2, const Momentum& k) {
  if (k.is_zero()) throw ConfigError("lune is undefined for k = 0");
  if (kf2 < 1) throw ConfigError("kf2 must be a positive integer, got " + std::to_string(kf2));
  Lune lune;
  lune.k = k;
  lune.kf2 = kf2;
  const int kinf = std::max({std::abs(k.x), std::abs(k.y), std::abs(k.z)});
  const int R = iceil_sqrt(kf2) + kinf;
  for (int x = -R; x <= R; ++x)
    for (int y = -R; y <= R; ++y)
      for (int z = -R; z <= R; ++z) {
        const Momentum p{x, y, z};
        const std::int64_t n2 = p.norm2();
        const std::int64_t m2 = (p - k).norm2();
        if (m2 <= kf2 && kf2 < n2) {
          lune.points.push_back(p);
          lune.twice_lambda.push_back(n2 - m2);
        }
      }
  // box scan in x,y,z order is already lexicographic
  return lune;
}

Lune lune_from_ball(const FermiBall& ball, const Momentum& k) {
  if (k.is_zero()) throw ConfigError("lune is undefined for k = 0");
  Lune lune;
  lune.k = k;
  lune.kf2 = ball.kf2;
  const std::int64_t k2 = k.norm2();
  for (const Momentum& b : ball.points) {
    const Momentum p = b + k;
    const std::int64_t n2 = b.norm2() + 2 * k.dot(b) + k2;
    if (n2 > ball.kf2) {
      lune.points.push_back(p);
      lune.twice_lambda.push_back(n2 - b.norm2());
    }
  }
  // translation by k preserves lexicographic order
  return lune;
}

std::vector<std::pair<std::int64_t, std::int64_t>> lambda_histogram(const FermiBall& ball,
                                                                    const Momentum& k) {
  if (k.is_zero()) throw ConfigError("lune is undefined for k = 0");
  const std::int64_t k2 = k.norm2();
  // k.b ranges over [-B, B] by Cauchy-Schwarz; bin counts by k.b directly.
  const std::int64_t B = std::int64_t(std::ceil(std::sqrt(double(k2) * double(ball.kf2)))) + 1;
  std::vector<std::int64_t> bins(std::size_t(2 * B + 1), 0);
  for (const Momentum& b : ball.points) {
    const std::int64_t kb = k.dot(b);
    if (b.norm2() + 2 * kb + k2 > ball.kf2) ++bins[std::size_t(kb + B)];
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> hist;
  for (std::int64_t i = 0; i < std::int64_t(bins.size()); ++i)
    if (bins[std::size_t(i)] > 0) hist.push_back({2 * (i - B) + k2, bins[std::size_t(i)]});
  return hist;
}

std::int64_t count_lune(std::int64_t kf2, const Momentum& k) {
  if (k.is_zero()) throw ConfigError("lune is undefined for k = 0");
  // |L_k| = |B_F| - |B_F intersect (B_F - k)|; the intersection is counted
  // column-by-column since the ball's z-sections are runs [-zmax, zmax].
  const int R = iceil_sqrt(kf2);
  std::int64_t ball_count = 0, overlap = 0;
  for (int x = -R; x <= R; ++x) {
    const std::int64_t x2 = std::int64_t(x) * x;
    if (x2 > kf2) continue;
    for (int y = -R; y <= R; ++y) {
      const std::int64_t xy2 = x2 + std::int64_t(y) * y;
      if (xy2 > kf2) continue;
      int zm = int(std::sqrt(double(kf2 - xy2)));
      while (xy2 + std::int64_t(zm + 1) * (zm + 1) <= kf2) ++zm;
      while (zm > 0 && xy2 + std::int64_t(zm) * zm > kf2) --zm;
      ball_count += 2 * zm + 1;
      // column of B_F - k at the same (x, y): shift (x+kx, y+ky) column by -kz
      const std::int64_t X2 = std::int64_t(x + k.x) * (x + k.x);
      const std::int64_t XY2 = X2 + std::int64_t(y + k.y) * (y + k.y);
      if (XY2 > kf2) continue;
      int zs = int(std::sqrt(double(kf2 - XY2)));
      while (XY2 + std::int64_t(zs + 1) * (zs + 1) <= kf2) ++zs;
      while (zs > 0 && XY2 + std::int64_t(zs) * zs > kf2) --zs;
      const int lo = std::max(-zm, -zs - k.z);
      const int hi = std::min(zm, zs - k.z);
      if (hi >= lo) overlap += hi - lo + 1;
    }
  }
  return ball_count - overlap;
}

std::vector<LuneSlice> lune_slices(const Lune& lune) {
  const std::int64_t g = gcd3(lune.k);
  const double knorm = std::sqrt(double(lune.k.norm2()));
  const double l = double(g) / knorm;
  std::map<std::int64_t, LuneSlice> by_m;
  for (std::size_t i = 0; i < lune.points.size(); ++i) {
    const std::int64_t dot = lune.k.dot(lune.points[i]);
    if (dot % g != 0) throw Error("plane decomposition failed: k.p not a multiple of gcd(k)");
    const std::int64_t m = dot / g;
    auto& slice = by_m[m];
    if (slice.points.empty()) {
      slice.m = m;
      slice.l = l;
      slice.dot_value = dot;
      slice.plane_value = l * double(m);
    }
    slice.points.push_back(lune.points[i]);
  }
  std::vector<LuneSlice> slices;
  slices.reserve(by_m.size());
  for (auto& [m, slice] : by_m) slices.push_back(std::move(slice));
  return slices;
}

std::pair<Momentum, Momentum> find_perp_generators(const Momentum& k) {
  if (k.is_zero()) throw ConfigError("perpendicular lattice is undefined for k = 0");
  const std::int64_t g = gcd3(k);
  const std::int64_t k2 = k.norm2();
  // Minkowski: generators exist with |v1||v2| <= (4/pi)/l, l = g/|k|, and
  // |v1| >= 1, so a box of radius ceil((4/pi)|k|/g) is enough.
  const int R = int(std::ceil(4.0 / 3.141592653589793 * std::sqrt(double(k2)) / double(g))) + 1;
  std::vector<Momentum> candidates;
  for (int x = -R; x <= R; ++x)
    for (int y = -R; y <= R; ++y)
      for (int z = -R; z <= R; ++z) {
        const Momentum v{x, y, z};
        if (v.is_zero()) continue;
        if (k.dot(v) != 0) continue;
        candidates.push_back(v);
      }
  std::sort(candidates.begin(), candidates.end(), [](const Momentum& a, const Momentum& b) {
    if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
    return a < b;
  });
  if (candidates.empty()) throw Error("no perpendicular lattice vectors found for k = " + to_string(k));
  const Momentum v1 = candidates.front();
  for (const Momentum& v2 : candidates) {
    // linear independence via a nonzero cross product
    const std::int64_t cx = std::int64_t(v1.y) * v2.z - std::int64_t(v1.z) * v2.y;
    const std::int64_t cy = std::int64_t(v1.z) * v2.x - std::int64_t(v1.x) * v2.z;
    const std::int64_t cz = std::int64_t(v1.x) * v2.y - std::int64_t(v1.y) * v2.x;
    if (cx == 0 && cy == 0 && cz == 0) continue;
    // covolume check: Gram determinant must equal (|k|/gcd)^2 exactly
    const std::int64_t gram = v1.norm2() * v2.norm2() - v1.dot(v2) * v1.dot(v2);
    if (gram * g * g == k2) return {v1, v2};
  }
  throw Error("covolume check failed for every candidate pair, k = " + to_string(k));
}

double ellipse_slice_area(std::int64_t kf2, const Momentum& k, std::int64_t m) {
  const std::int64_t g = gcd3(k);
  const double knorm = std::sqrt(double(k.norm2()));
  const double l = double(g) / knorm;
  const double lm = l * double(m);
  const double kf = std::sqrt(double(kf2));
  const double r2sq = double(kf2) - (lm - knorm) * (lm - knorm);  // outer radius^2
  if (r2sq <= 0.0) return 0.0;                                    // plane misses both spheres
  if (lm <= kf) return kTwoPi * knorm * (lm - 0.5 * knorm) * l;   // annulus
  return 0.5 * kTwoPi * r2sq * l;                                 // disc (inner sphere missed)
}

std::vector<SliceCountReport> slice_ellipse_report(const Lune& lune,
                                                   const std::pair<Momentum, Momentum>& gens) {
  const Momentum& k = lune.k;
  const Momentum &v1 = gens.first, &v2 = gens.second;
  if (k.dot(v1) != 0 || k.dot(v2) != 0)
    throw ConfigError("generators are not orthogonal to k = " + to_string(k));
  const std::int64_t g = gcd3(k);
  const std::int64_t gram = v1.norm2() * v2.norm2() - v1.dot(v2) * v1.dot(v2);
  if (gram * g * g != k.norm2())
    throw ConfigError("generator covolume check failed for k = " + to_string(k));

  const double knorm = std::sqrt(double(k.norm2()));
  const double l = double(g) / knorm;
  const double kf = std::sqrt(double(lune.kf2));

  // exact counts keyed by m
  std::map<std::int64_t, std::int64_t> counts;
  for (const Momentum& p : lune.points) counts[k.dot(p) / g]++;

  // m range: l*m > |k|/2 and l*m <= kF + |k|, i.e. 2*g*m > |k|^2 and
  // g*m <= |k|(kF + |k|); the right end is compared in floating point.
  std::int64_t m_lo = std::int64_t(std::floor(double(k.norm2()) / (2.0 * double(g)))) + 1;
  while (2 * g * m_lo <= k.norm2()) ++m_lo;
  std::int64_t m_hi = std::int64_t(std::floor(knorm * (kf + knorm) / double(g)));
  while (double(g) * double(m_hi) > knorm * (kf + knorm)) --m_hi;

  // geometry of the outer ellipse from the generator Gram data
  const double n1 = double(v1.norm2()), n2v = double(v2.norm2()), cr = double(v1.dot(v2));
  const double disc = std::sqrt((n1 - n2v) * (n1 - n2v) + 4.0 * cr * cr);
  const double qplus = n1 + n2v + disc, qminus = n1 + n2v - disc;
  const double ratio = std::pow(qplus / qminus, 1.5);  // r2/r1 = (a/b)^3

  std::vector<SliceCountReport> reports;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    SliceCountReport rep;
    rep.m = m;
    auto it = counts.find(m);
    rep.exact_count = (it == counts.end()) ? 0 : it->second;
    rep.ellipse_area = ellipse_slice_area(lune.kf2, k, m);
    const double lm = l * double(m);
    const double r2sq = double(lune.kf2) - (lm - knorm) * (lm - knorm);
    const double R2 = r2sq > 0.0 ? std::sqrt(r2sq) : 0.0;
    const double a = std::sqrt(2.0) * R2 / std::sqrt(qminus);
    const double b = std::sqrt(2.0) * R2 / std::sqrt(qplus);
    rep.radii_ratio_bound = ratio;
    rep.curvature_bound = b > 0.0 ? a * a / b : 0.0;
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace fg
