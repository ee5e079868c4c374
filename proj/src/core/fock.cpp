#include "fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace fg {

int Mask::popcount_below(int i) const {
  if (i <= 0) return 0;
  if (i <= 64) {
    const std::uint64_t m = i == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << i) - 1);
    return std::popcount(lo & m);
  }
  const int j = i - 64;
  const std::uint64_t m = j >= 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << j) - 1);
  return std::popcount(lo) + std::popcount(hi & m);
}

int Mask::popcount() const { return std::popcount(lo) + std::popcount(hi); }

ModeUniverse::ModeUniverse(std::int64_t kf2, int s, const std::set<Momentum>& momenta)
    : kf2_(kf2), s_(s) {
  if (s < 1) throw ConfigError("spin count must be >= 1");
  if (momenta.size() * std::size_t(s) > 128)
    throw ClosureError("universe needs " + std::to_string(momenta.size() * std::size_t(s)) +
                       " modes; the occupation mask holds at most 128");
  for (const Momentum& p : momenta)
    for (int sigma = 0; sigma < s; ++sigma) {
      index_[{p, sigma}] = int(modes_.size());
      modes_.push_back({p, sigma});
      const bool in = p.norm2() <= kf2;
      inside_.push_back(in);
      if (in) ++n_;
    }
}

bool ModeUniverse::has(const Momentum& p) const { return index_.count({p, 0}) > 0; }

int ModeUniverse::index(const Momentum& p, int sigma) const {
  auto it = index_.find({p, sigma});
  if (it == index_.end())
    throw ClosureError("mode " + to_string(p) + " (spin " + std::to_string(sigma) +
                       ") missing from the universe");
  return it->second;
}

double SparseState::norm2() const {
  double acc = 0.0;
  for (const auto& [m, a] : amp) acc += a * a;
  return acc;
}

void SparseState::add(const Mask& m, double a) {
  auto [it, inserted] = amp.try_emplace(m, a);
  if (!inserted) it->second += a;
}

void SparseState::prune(double threshold) {
  for (auto it = amp.begin(); it != amp.end();)
    it = std::abs(it->second) < threshold ? amp.erase(it) : std::next(it);
}

SparseState& SparseState::operator+=(const SparseState& o) {
  for (const auto& [m, a] : o.amp) add(m, a);
  return *this;
}

SparseState& SparseState::operator*=(double c) {
  for (auto& [m, a] : amp) a *= c;
  return *this;
}

double inner(const SparseState& a, const SparseState& b) {
  const SparseState& small = a.amp.size() <= b.amp.size() ? a : b;
  const SparseState& big = a.amp.size() <= b.amp.size() ? b : a;
  double acc = 0.0;
  for (const auto& [m, x] : small.amp) {
    auto it = big.amp.find(m);
    if (it != big.amp.end()) acc += x * it->second;
  }
  return acc;
}

SparseState sub(const SparseState& a, const SparseState& b) {
  SparseState out = a;
  for (const auto& [m, x] : b.amp) out.add(m, -x);
  out.prune(0.0);
  return out;
}

double max_amp_diff(const SparseState& a, const SparseState& b) {
  double worst = 0.0;
  for (const auto& [m, x] : a.amp) {
    auto it = b.amp.find(m);
    worst = std::max(worst, std::abs(x - (it == b.amp.end() ? 0.0 : it->second)));
  }
  for (const auto& [m, x] : b.amp)
    if (!a.amp.count(m)) worst = std::max(worst, std::abs(x));
  return worst;
}

SparseState apply_c(const SparseState& s, int mode) {
  SparseState out;
  for (const auto& [m, a] : s.amp) {
    if (!m.test(mode)) continue;
    Mask nm = m;
    nm.clear(mode);
    out.add(nm, (m.popcount_below(mode) % 2 == 0 ? a : -a));
  }
  out.prune();
  return out;
}

SparseState apply_cdag(const SparseState& s, int mode) {
  SparseState out;
  for (const auto& [m, a] : s.amp) {
    if (m.test(mode)) continue;
    Mask nm = m;
    nm.set(mode);
    out.add(nm, (m.popcount_below(mode) % 2 == 0 ? a : -a));
  }
  out.prune();
  return out;
}

SparseState fermi_state(const ModeUniverse& u) {
  Mask m;
  for (int i = 0; i < u.size(); ++i)
    if (u.inside(i)) m.set(i);
  SparseState s;
  s.amp[m] = 1.0;
  return s;
}

SparseState apply_b(const SparseState& s, const ModeUniverse& u, const Momentum& k,
                    const Momentum& p) {
  const double f = 1.0 / std::sqrt(double(u.spin_states()));
  SparseState out;
  for (int sigma = 0; sigma < u.spin_states(); ++sigma) {
    const int ip = u.index(p, sigma);
    const int ih = u.index(p - k, sigma);
    SparseState t = apply_cdag(apply_c(s, ip), ih);
    t *= f;
    out += t;
  }
  out.prune();
  return out;
}

SparseState apply_bdag(const SparseState& s, const ModeUniverse& u, const Momentum& k,
                       const Momentum& p) {
  const double f = 1.0 / std::sqrt(double(u.spin_states()));
  SparseState out;
  for (int sigma = 0; sigma < u.spin_states(); ++sigma) {
    const int ip = u.index(p, sigma);
    const int ih = u.index(p - k, sigma);
    SparseState t = apply_cdag(apply_c(s, ih), ip);
    t *= f;
    out += t;
  }
  out.prune();
  return out;
}

namespace {

void require_particle_number(const Mask& m, const ModeUniverse& u) {
  if (m.popcount() != u.num_particles())
    throw Error("particle-number violation: configuration has " + std::to_string(m.popcount()) +
                " particles, expected " + std::to_string(u.num_particles()));
}

}  // namespace

SparseState apply_hkin_prime(const SparseState& s, const ModeUniverse& u) {
  SparseState out;
  for (const auto& [m, a] : s.amp) {
    require_particle_number(m, u);
    double e = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      if (!u.inside(i) && m.test(i)) e += double(u.momentum(i).norm2());
      if (u.inside(i) && !m.test(i)) e -= double(u.momentum(i).norm2());
    }
    if (e != 0.0) out.add(m, e * a);
  }
  out.prune();
  return out;
}

SparseState apply_ne_particle(const SparseState& s, const ModeUniverse& u) {
  SparseState out;
  for (const auto& [m, a] : s.amp) {
    require_particle_number(m, u);
    int count = 0;
    for (int i = 0; i < u.size(); ++i)
      if (!u.inside(i) && m.test(i)) ++count;
    if (count > 0) out.add(m, double(count) * a);
  }
  return out;
}

SparseState apply_ne_hole(const SparseState& s, const ModeUniverse& u) {
  SparseState out;
  for (const auto& [m, a] : s.amp) {
    require_particle_number(m, u);
    int count = 0;
    for (int i = 0; i < u.size(); ++i)
      if (u.inside(i) && !m.test(i)) ++count;
    if (count > 0) out.add(m, double(count) * a);
  }
  return out;
}

std::set<Momentum> contributing_transfers(const SparseState& s, const ModeUniverse& u) {
  std::set<Momentum> transfers;
  for (const auto& [m, a] : s.amp) {
    for (int iq = 0; iq < u.size(); ++iq) {
      if (u.inside(iq) || !m.test(iq)) continue;  // want occupied outside modes
      for (int ih = 0; ih < u.size(); ++ih) {
        if (!u.inside(ih) || m.test(ih)) continue;  // want holes
        if (u.spin(ih) != u.spin(iq)) continue;
        const Momentum k = u.momentum(iq) - u.momentum(ih);
        if (!k.is_zero()) transfers.insert(k);
      }
    }
  }
  return transfers;
}

SparseState apply_heff(const SparseState& s, const ModeUniverse& u,
                       const std::map<Momentum, const KernelBundle*>& bundles) {
  for (const Momentum& k : contributing_transfers(s, u))
    if (!bundles.count(k))
      throw ClosureError("no kernel bundle supplied for contributing k = " + to_string(k));

  SparseState out = apply_hkin_prime(s, u);
  for (const auto& [k, bundle] : bundles) {
    const Lune& lune = bundle->lune;
    const Matrix t = bundle->Etilde - Matrix(bundle->lambda.asDiagonal());
    for (std::size_t qi = 0; qi < lune.size(); ++qi) {
      const SparseState bq = apply_b(s, u, k, lune.points[qi]);
      if (bq.empty()) continue;
      for (std::size_t pi = 0; pi < lune.size(); ++pi) {
        const double coeff = 2.0 * t(Eigen::Index(pi), Eigen::Index(qi));
        if (coeff == 0.0) continue;
        SparseState term = apply_bdag(bq, u, k, lune.points[pi]);
        term *= coeff;
        out += term;
      }
    }
  }
  out.prune();
  return out;
}

SparseState psi_m(const ModeUniverse& u, const Lune& lune, const std::vector<double>& phi, int M) {
  if (M < 0) throw ConfigError("M must be >= 0");
  if (phi.size() != lune.size()) throw ConfigError("phi must be indexed by the lune points");
  SparseState state = fermi_state(u);
  for (int step = 0; step < M; ++step) {
    SparseState next;
    for (std::size_t i = 0; i < lune.size(); ++i) {
      if (phi[i] == 0.0) continue;
      SparseState term = apply_bdag(state, u, lune.k, lune.points[i]);
      term *= phi[i];
      next += term;
    }
    next.prune();
    state = std::move(next);
  }
  return state;
}

std::vector<Momentum> psi_m_transfer_set(std::int64_t kf2, const Momentum& k) {
  const Lune lune = enumerate_lune(kf2, k);
  std::set<Momentum> ls;
  for (const Momentum& p : lune.points)
    for (const Momentum& q : lune.points) {
      const Momentum l = p - q + k;
      if (!l.is_zero()) ls.insert(l);
    }
  std::vector<Momentum> out(ls.begin(), ls.end());
  std::sort(out.begin(), out.end(), [](const Momentum& a, const Momentum& b) {
    if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
    return a < b;
  });
  return out;
}

std::set<Momentum> psi_m_support(std::int64_t kf2, const Momentum& k) {
  std::set<Momentum> support;
  for (const Momentum& p : enumerate_fermi_ball(kf2).points) support.insert(p);
  for (const Momentum& l : psi_m_transfer_set(kf2, k))
    for (const Momentum& p : enumerate_lune(kf2, l).points) support.insert(p);
  return support;
}

ResidualCheck residual_identity_check(const FermiSystem& system, const Momentum& k, int M) {
  system.validate();
  if (M < 1) throw ConfigError("residual identity requires M >= 1");
  if (system.mean_field)
    throw ConfigError("residual identity uses the unscaled regime (mean_field = false)");

  const PlasmonMode mode = compute_mode(system, k);
  const ModeUniverse u(system.kf2, system.s, psi_m_support(system.kf2, k));
  const std::vector<Momentum> transfers = psi_m_transfer_set(system.kf2, k);

  std::map<Momentum, KernelBundle> store;
  std::map<Momentum, const KernelBundle*> bundles;
  for (const Momentum& l : transfers) {
    store.emplace(l, build_kernel_bundle(system, l));
    bundles[l] = &store.at(l);
  }
  const Lune& lune = store.at(k).lune;
  const std::vector<double> phi = mode.phi_over_lune(lune);

  ResidualCheck out;
  out.phi_inf = mode.phi_inf;
  for (const auto& [l, b] : store) {
    const Matrix diff = b.Etilde - Matrix(b.lambda.asDiagonal());
    out.hs_sum += diff.squaredNorm();
  }

  const SparseState psi = psi_m(u, lune, phi, M);
  out.psi_m_norm = psi.norm();
  SparseState hpsi = apply_heff(psi, u, bundles);
  SparseState scaled = psi;
  scaled *= -double(M) * mode.epsilon;
  hpsi += scaled;
  hpsi.prune();
  out.lhs = hpsi.norm();

  if (M >= 2) {
    const SparseState psi2 = psi_m(u, lune, phi, M - 2);
    SparseState epsi;
    for (std::size_t a = 0; a < lune.size(); ++a) {
      if (phi[a] == 0.0) continue;
      const Momentum p = lune.points[a];
      for (std::size_t bidx = 0; bidx < lune.size(); ++bidx) {
        if (phi[bidx] == 0.0) continue;
        const Momentum q = lune.points[bidx];
        const Momentum l = p - q + k;
        if (l.is_zero()) continue;
        const KernelBundle& bl = store.at(l);
        const std::size_t p_in_l = bl.lune.index_of(p);
        // sum_sigma b*_l((Etilde_l - h_l) e_p) c*_{q,sigma} c_{p-k,sigma}
        SparseState hop;
        for (int sigma = 0; sigma < system.s; ++sigma) {
          SparseState t = apply_cdag(apply_c(psi2, u.index(p - k, sigma)), u.index(q, sigma));
          hop += t;
        }
        hop.prune();
        if (hop.empty()) continue;
        for (std::size_t ci = 0; ci < bl.lune.size(); ++ci) {
          const double coeff =
              bl.Etilde(Eigen::Index(ci), Eigen::Index(p_in_l)) -
              (ci == p_in_l ? bl.lambda[Eigen::Index(ci)] : 0.0);
          if (coeff == 0.0) continue;
          SparseState term = apply_bdag(hop, u, l, bl.lune.points[ci]);
          term *= coeff * phi[a] * phi[bidx];
          epsi += term;
        }
      }
    }
    epsi.prune();
    out.rhs = 2.0 * double(M) * double(M - 1) / std::pow(double(system.s), 1.5) * epsi.norm();
  }
  return out;
}

ExchangeVacuumCheck exchange_vacuum_check(const FermiSystem& system, const Momentum& k,
                                          const Matrix& b_matrix) {
  system.validate();
  const Lune lune = enumerate_lune(system.kf2, k);
  const Eigen::Index n = Eigen::Index(lune.size());
  if (b_matrix.rows() != n || b_matrix.cols() != n)
    throw ConfigError("B matrix must act on l^2(L_k)");

  // l-set of the closed form; the direct route also needs the negatives
  std::set<Momentum> lset;
  for (const Momentum& p : lune.points)
    for (const Momentum& q : lune.points) {
      const Momentum l = p + q - k;
      if (!l.is_zero()) lset.insert(l);
    }
  std::set<Momentum> lset_full = lset;
  for (const Momentum& l : lset) lset_full.insert(-l);

  std::map<Momentum, KernelBundle> kernels;
  for (const Momentum& l : lset_full) kernels.emplace(l, build_kernel_bundle(system, l));

  std::set<Momentum> support;
  for (const Momentum& p : enumerate_fermi_ball(system.kf2).points) support.insert(p);
  for (const Momentum& p : lune.points) {
    support.insert(p);
    support.insert(-p);
  }
  for (const auto& [l, bundle] : kernels)
    for (const Momentum& p : bundle.lune.points) support.insert(p);
  const ModeUniverse u(system.kf2, system.s, support);
  const SparseState vac = fermi_state(u);

  // operator pieces as state maps
  auto apply_bk_row = [&](const SparseState& s, const Matrix& mat, const Lune& lk,
                          std::size_t col) {
    // b_k(mat e_col) = sum_row mat(row, col) b_{k, p_row}
    SparseState out;
    for (std::size_t row = 0; row < lk.size(); ++row) {
      const double c = mat(Eigen::Index(row), Eigen::Index(col));
      if (c == 0.0) continue;
      SparseState t = apply_b(s, u, lk.k, lk.points[row]);
      t *= c;
      out += t;
    }
    out.prune();
    return out;
  };
  auto apply_bdag_row = [&](const SparseState& s, const Matrix& mat, const Lune& ll,
                            std::size_t col) {
    SparseState out;
    for (std::size_t row = 0; row < ll.size(); ++row) {
      const double c = mat(Eigen::Index(row), Eigen::Index(col));
      if (c == 0.0) continue;
      SparseState t = apply_bdag(s, u, ll.k, ll.points[row]);
      t *= c;
      out += t;
    }
    out.prune();
    return out;
  };

  ExchangeVacuumCheck out;

  // direct route: 1/2 sum_l sum_p sum_q <psi_F, {b_k(Be_p), {eps, b*_l(K_l e_q)}} psi_F>
  for (const Momentum& l : lset_full) {
    const KernelBundle& bl = kernels.at(l);
    for (std::size_t pi = 0; pi < lune.size(); ++pi) {
      const Momentum p = lune.points[pi];
      // q values for which eps_{-k,-l}(e_{-p}; e_{-q}) != 0
      std::set<Momentum> qset;
      if (bl.lune.contains(p)) qset.insert(p);
      const Momentum q2 = p - k + l;
      if (bl.lune.contains(q2)) qset.insert(q2);
      for (const Momentum& q : qset) {
        const std::size_t qi = bl.lune.index_of(q);
        auto X = [&](const SparseState& s) { return apply_bk_row(s, b_matrix, lune, pi); };
        auto Z = [&](const SparseState& s) { return apply_bdag_row(s, bl.K, bl.lune, qi); };
        auto Y = [&](const SparseState& s) {
          // eps_{-k,-l}(e_{-p}; e_{-q}) =
          //   -(1/s) sum_sigma [ d_{p,q} c_{l-q} c*_{k-p} + d_{p-k,q-l} c*_{-q} c_{-p} ]
          SparseState acc;
          for (int sigma = 0; sigma < system.s; ++sigma) {
            if (p == q) acc += apply_c(apply_cdag(s, u.index(k - p, sigma)), u.index(l - q, sigma));
            if (p - k == q - l) acc += apply_cdag(apply_c(s, u.index(-p, sigma)), u.index(-q, sigma));
          }
          acc *= -1.0 / double(system.s);
          acc.prune();
          return acc;
        };
        // {X, {Y, Z}} = XYZ + XZY + YZX + ZYX
        double val = 0.0;
        val += inner(vac, X(Y(Z(vac))));
        val += inner(vac, X(Z(Y(vac))));
        val += inner(vac, Y(Z(X(vac))));
        val += inner(vac, Z(Y(X(vac))));
        out.direct += 0.5 * val;
      }
    }
  }

  // closed form: -(1/s) sum_{p,q in L_k} <e_p, B e_q> <e_q, K_{p+q-k} e_p>
  for (std::size_t pi = 0; pi < lune.size(); ++pi)
    for (std::size_t qi = 0; qi < lune.size(); ++qi) {
      const Momentum l = lune.points[pi] + lune.points[qi] - k;
      if (l.is_zero()) continue;
      const KernelBundle& bl = kernels.at(l);
      const std::size_t a = bl.lune.index_of(lune.points[qi]);
      const std::size_t b = bl.lune.index_of(lune.points[pi]);
      out.closed_form -= b_matrix(Eigen::Index(pi), Eigen::Index(qi)) *
                         bl.K(Eigen::Index(a), Eigen::Index(b)) / double(system.s);
    }
  return out;
}

}  // namespace fg
