#ifndef FG_GEOMETRY_HPP
#define FG_GEOMETRY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "common.hpp"

namespace fg {

// Integer momentum on the lattice Z^3. All set membership downstream is done
// with exact integer comparisons against kF^2; ordering is lexicographic.
struct Momentum {
  int x = 0, y = 0, z = 0;

  std::int64_t norm2() const {
    return std::int64_t(x) * x + std::int64_t(y) * y + std::int64_t(z) * z;
  }
  std::int64_t dot(const Momentum& o) const {
    return std::int64_t(x) * o.x + std::int64_t(y) * o.y + std::int64_t(z) * o.z;
  }
  Momentum operator+(const Momentum& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Momentum operator-(const Momentum& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Momentum operator-() const { return {-x, -y, -z}; }
  bool operator==(const Momentum& o) const { return x == o.x && y == o.y && z == o.z; }
  bool operator!=(const Momentum& o) const { return !(*this == o); }
  bool operator<(const Momentum& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
  bool is_zero() const { return x == 0 && y == 0 && z == 0; }
};

std::string to_string(const Momentum& p);

// Closed Fermi ball: all p with |p|^2 <= kf2, sorted lexicographically.
struct FermiBall {
  std::int64_t kf2 = 0;
  std::vector<Momentum> points;
  std::size_t size() const { return points.size(); }
};

// Lune L_k = (B_F + k) \ B_F with the cached values 2*lambda_{k,p}.
// lambda_{k,p} = (|p|^2 - |p-k|^2)/2 is a half-integer >= 1/2; we keep the
// exact integer 2*lambda alongside the points.
struct Lune {
  Momentum k;
  std::int64_t kf2 = 0;
  std::vector<Momentum> points;            // sorted lexicographically
  std::vector<std::int64_t> twice_lambda;  // parallel to points

  std::size_t size() const { return points.size(); }
  double lambda(std::size_t i) const { return 0.5 * double(twice_lambda[i]); }
  double lambda_min() const;
  double lambda_max() const;
  bool contains(const Momentum& p) const;   // binary search on the sorted points
  std::size_t index_of(const Momentum& p) const;  // throws if absent
};

// One lattice plane k.p = gcd(k)*m intersected with the lune.
struct LuneSlice {
  std::int64_t m = 0;
  double l = 0.0;              // gcd(k1,k2,k3)/|k|, the plane spacing along k-hat
  std::int64_t dot_value = 0;  // gcd(k)*m = k.p, exact
  double plane_value = 0.0;    // l*m, position along k-hat
  std::vector<Momentum> points;
};

// Exact slice count against the ellipse-annulus area of the plane section.
struct SliceCountReport {
  std::int64_t m = 0;
  std::int64_t exact_count = 0;
  double ellipse_area = 0.0;
  double radii_ratio_bound = 0.0;  // r2/r1 of the outer ellipse
  double curvature_bound = 0.0;    // r2 of the outer ellipse
};

FermiBall enumerate_fermi_ball(std::int64_t kf2);

// Box-scan enumeration over [-ceil(sqrt(kf2))-|k|_inf, ceil(sqrt(kf2))+|k|_inf]^3.
Lune enumerate_lune(std::int64_t kf2, const Momentum& k);

// Same result as enumerate_lune, built by translating a cached ball.
Lune lune_from_ball(const FermiBall& ball, const Momentum& k);

// Multiset {2*lambda_{k,p} : p in L_k} aggregated as sorted (value, count)
// pairs; avoids materializing large lunes in the energy sweeps.
std::vector<std::pair<std::int64_t, std::int64_t>> lambda_histogram(const FermiBall& ball,
                                                                    const Momentum& k);

// |L_k| without materializing points, via the z-run structure of the ball.
std::int64_t count_lune(std::int64_t kf2, const Momentum& k);

std::vector<LuneSlice> lune_slices(const Lune& lune);

std::pair<Momentum, Momentum> find_perp_generators(const Momentum& k);

// Reports for every plane index m in [m*, M*]; validates the generators
// (orthogonality and covolume) before counting.
std::vector<SliceCountReport> slice_ellipse_report(const Lune& lune,
                                                   const std::pair<Momentum, Momentum>& gens);

// Area(E_2^m \ E_1^m) for an arbitrary plane index m; 0 if the plane misses
// both spheres.  Exposed separately so out-of-range slices can be probed.
double ellipse_slice_area(std::int64_t kf2, const Momentum& k, std::int64_t m);

std::int64_t gcd3(const Momentum& k);

}  // namespace fg

#endif
