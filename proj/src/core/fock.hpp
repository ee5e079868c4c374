#ifndef FG_FOCK_HPP
#define FG_FOCK_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "kernel.hpp"
#include "plasmon.hpp"
#include "system.hpp"

namespace fg {

// Occupation bitmask over up to 128 modes.
struct Mask {
  std::uint64_t lo = 0, hi = 0;
  bool operator==(const Mask& o) const { return lo == o.lo && hi == o.hi; }
  bool test(int i) const {
    return i < 64 ? (lo >> i) & 1u : (hi >> (i - 64)) & 1u;
  }
  void set(int i) {
    if (i < 64) lo |= std::uint64_t(1) << i;
    else hi |= std::uint64_t(1) << (i - 64);
  }
  void clear(int i) {
    if (i < 64) lo &= ~(std::uint64_t(1) << i);
    else hi &= ~(std::uint64_t(1) << (i - 64));
  }
  // number of set bits strictly below position i
  int popcount_below(int i) const;
  int popcount() const;
};

struct MaskHash {
  std::size_t operator()(const Mask& m) const {
    std::uint64_t x = m.lo * 0x9e3779b97f4a7c15ULL;
    x ^= m.hi + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
    x ^= x >> 31;
    return std::size_t(x);
  }
};

// Plane-wave mode basis: (momentum, spin), ordered lexicographically by
// momentum then spin.  N = s * (number of inside momenta).
class ModeUniverse {
 public:
  ModeUniverse(std::int64_t kf2, int s, const std::set<Momentum>& momenta);

  int size() const { return int(modes_.size()); }
  int num_particles() const { return n_; }
  std::int64_t kf2() const { return kf2_; }
  int spin_states() const { return s_; }
  bool inside(int idx) const { return inside_[std::size_t(idx)]; }
  const Momentum& momentum(int idx) const { return modes_[std::size_t(idx)].first; }
  int spin(int idx) const { return modes_[std::size_t(idx)].second; }
  bool has(const Momentum& p) const;
  int index(const Momentum& p, int sigma) const;  // throws ClosureError if absent

 private:
  std::int64_t kf2_;
  int s_;
  int n_ = 0;
  std::vector<std::pair<Momentum, int>> modes_;
  std::vector<bool> inside_;
  std::map<std::pair<Momentum, int>, int> index_;
};

// Finitely supported amplitude map; entries below 1e-14 are pruned.
struct SparseState {
  std::unordered_map<Mask, double, MaskHash> amp;

  double norm2() const;
  double norm() const { return std::sqrt(norm2()); }
  void add(const Mask& m, double a);
  void prune(double threshold = 1e-14);
  SparseState& operator+=(const SparseState& o);
  SparseState& operator*=(double c);
  bool empty() const { return amp.empty(); }
};

double inner(const SparseState& a, const SparseState& b);
SparseState sub(const SparseState& a, const SparseState& b);
double max_amp_diff(const SparseState& a, const SparseState& b);

SparseState apply_c(const SparseState& s, int mode);
SparseState apply_cdag(const SparseState& s, int mode);

SparseState fermi_state(const ModeUniverse& u);

// b_{k,p} = s^{-1/2} sum_sigma c^*_{p-k,sigma} c_{p,sigma}; requires p and
// p-k in the universe.
SparseState apply_b(const SparseState& s, const ModeUniverse& u, const Momentum& k,
                    const Momentum& p);
SparseState apply_bdag(const SparseState& s, const ModeUniverse& u, const Momentum& k,
                       const Momentum& p);

SparseState apply_hkin_prime(const SparseState& s, const ModeUniverse& u);
SparseState apply_ne_particle(const SparseState& s, const ModeUniverse& u);
SparseState apply_ne_hole(const SparseState& s, const ModeUniverse& u);

// Momentum-transfer values q - h over the state's support: q an occupied
// outside mode, h an unoccupied inside mode.  These are the k whose
// excitation operators act nontrivially.
std::set<Momentum> contributing_transfers(const SparseState& s, const ModeUniverse& u);

// H_eff = H'_kin + 2 sum_k sum_{p,q} <e_p,(Etilde_k - h_k)e_q> b*_{k,p} b_{k,q}.
// The bundle map must cover every contributing transfer of the state.
SparseState apply_heff(const SparseState& s, const ModeUniverse& u,
                       const std::map<Momentum, const KernelBundle*>& bundles);

// Psi_M = b*_k(phi)^M psi_F with phi given per lune point.
SparseState psi_m(const ModeUniverse& u, const Lune& lune, const std::vector<double>& phi, int M);

// Momentum support needed to apply H_eff and the error operator to Psi_M:
// B_F, L_k, and L_l for every l = p - q + k with p, q in L_k.
std::set<Momentum> psi_m_support(std::int64_t kf2, const Momentum& k);
std::vector<Momentum> psi_m_transfer_set(std::int64_t kf2, const Momentum& k);

struct ResidualCheck {
  double lhs = 0.0;  // |(H_eff - M eps_k) Psi_M|
  double rhs = 0.0;  // (2M(M-1)/s^{3/2}) |E Psi_{M-2}|
  double psi_m_norm = 0.0;
  double phi_inf = 0.0;
  double hs_sum = 0.0;  // sum over contributing l of |Etilde_l - h_l|_HS^2
};
ResidualCheck residual_identity_check(const FermiSystem& system, const Momentum& k, int M);

struct ExchangeVacuumCheck {
  double direct = 0.0;       // <psi_F, E^2_k(B) psi_F> from the operator definition
  double closed_form = 0.0;  // -(1/s) sum_{p,q} <e_p,B e_q><e_q,K_{p+q-k} e_p>
};
ExchangeVacuumCheck exchange_vacuum_check(const FermiSystem& system, const Momentum& k,
                                          const Matrix& b_matrix);

}  // namespace fg

#endif
