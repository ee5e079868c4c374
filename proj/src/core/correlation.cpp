#include "correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "parallel.hpp"
#include "quadrature.hpp"

namespace fg {

std::vector<Momentum> momentum_shell(int cutoff) {
  std::vector<Momentum> ks;
  const std::int64_t c2 = std::int64_t(cutoff) * cutoff;
  for (int x = -cutoff; x <= cutoff; ++x)
    for (int y = -cutoff; y <= cutoff; ++y)
      for (int z = -cutoff; z <= cutoff; ++z) {
        const Momentum k{x, y, z};
        if (k.is_zero()) continue;
        if (k.norm2() <= c2) ks.push_back(k);
      }
  std::sort(ks.begin(), ks.end(), [](const Momentum& a, const Momentum& b) {
    if (a.norm2() != b.norm2()) return a.norm2() < b.norm2();
    return a < b;
  });
  return ks;
}

int default_cutoff(const FermiSystem& system) {
  const int two_kf = 2 * int(std::ceil(std::sqrt(double(system.kf2))));
  return two_kf + system.potential.support_radius();
}

double fermi_energy(const FermiSystem& system) {
  system.validate();
  const FermiBall ball = enumerate_fermi_ball(system.kf2);
  double kinetic = 0.0;
  for (const Momentum& p : ball.points) kinetic += double(p.norm2());
  kinetic *= double(system.s);

  const double n_particles = double(system.s) * double(ball.size());
  double interaction = n_particles * (n_particles - 1.0) * system.v0hat / (2.0 * kTwoPiCubed);
  // sum over 0 < |k| <= 2 kF of V_k (N - s|L_k|); zero beyond 2 kF
  const int cutoff = 2 * int(std::ceil(std::sqrt(double(system.kf2))));
  for (const Momentum& k : momentum_shell(cutoff)) {
    const double vk = system.vhat(k);
    if (vk == 0.0) continue;
    const double deficit = n_particles - double(system.s) * double(count_lune(system.kf2, k));
    interaction -= vk * deficit / (2.0 * kTwoPiCubed);
  }
  return kinetic + system.coupling_scale() * interaction;
}

namespace {

// Per-k bosonic term (1/pi) int_0^inf F(2 sign <v, h(h^2+t^2)^{-1} v>) dt from
// the aggregated lambda histogram.  Independent of the spectral route used by
// trace_formula_check.
double bos_term(const FermiSystem& system, const FermiBall& ball, const Momentum& k,
                double rel_tol) {
  const double vk = system.vhat(k);
  if (vk == 0.0) return 0.0;
  const auto hist = lambda_histogram(ball, k);
  if (hist.empty()) return 0.0;
  const double coeff = 2.0 * system.v_entry_sq(k) * (vk > 0.0 ? 1.0 : -1.0);
  if (vk < 0.0) {
    double sum_inv = 0.0;
    for (const auto& [tl, count] : hist) sum_inv += double(count) / (0.5 * double(tl));
    const double margin = 1.0 - 2.0 * system.v_entry_sq(k) * sum_inv;
    if (margin <= 1e-12)
      throw AdmissibilityError("inadmissible attractive mode at k = " + to_string(k) +
                                   ": 1 - 2<v,h^-1 v> = " + std::to_string(margin),
                               margin);
  }
  std::vector<double> lam, weight;
  lam.reserve(hist.size());
  weight.reserve(hist.size());
  for (const auto& [tl, count] : hist) {
    lam.push_back(0.5 * double(tl));
    weight.push_back(double(count));
  }
  const double scale = lam[lam.size() / 2];
  auto integrand = [&](double t) {
    double x = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i)
      x += weight[i] * lam[i] / (lam[i] * lam[i] + t * t);
    return log1p_minus_x(coeff * x);
  };
  return integrate_half_line(integrand, scale, rel_tol) / 3.141592653589793;
}

}  // namespace

BosResult e_corr_bos(const FermiSystem& system, int k_cutoff, int jobs, double rel_tol) {
  system.validate();
  if (k_cutoff < 1) throw ConfigError("k_cutoff must be >= 1");
  const FermiBall ball = enumerate_fermi_ball(system.kf2);
  const std::vector<Momentum> ks = momentum_shell(k_cutoff);
  BosResult out;
  out.per_k.resize(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) {
    out.per_k[i].k = ks[i];
    out.per_k[i].e_bos = bos_term(system, ball, ks[i], rel_tol);
  });
  for (const PerKTerm& t : out.per_k) out.total += t.e_bos;
  return out;
}

ExResult e_corr_ex_per_k(const FermiSystem& system, int k_cutoff, int jobs) {
  system.validate();
  if (k_cutoff < 1) throw ConfigError("k_cutoff must be >= 1");
  const FermiBall ball = enumerate_fermi_ball(system.kf2);
  const std::vector<Momentum> ks = momentum_shell(k_cutoff);
  const double c = system.coupling_scale();
  const double prefactor = double(system.s) * c * c / (4.0 * kTwoPiCubed * kTwoPiCubed);
  ExResult out;
  out.per_k.resize(ks.size());
  parallel_for(ks.size(), jobs, [&](std::size_t i) {
    const Momentum k = ks[i];
    out.per_k[i].k = k;
    const double vk = system.vhat(k);
    if (vk == 0.0) return;
    const Lune lune = lune_from_ball(ball, k);
    double acc = 0.0;
    for (std::size_t a = 0; a < lune.size(); ++a)
      for (std::size_t bidx = 0; bidx < lune.size(); ++bidx) {
        const Momentum l = lune.points[a] + lune.points[bidx] - k;
        if (l.is_zero()) continue;  // l runs over Z^3_*, never cutoff-filtered
        const double vl = system.vhat(l);
        if (vl == 0.0) continue;
        acc += vl / (0.5 * double(lune.twice_lambda[a] + lune.twice_lambda[bidx]));
      }
    out.per_k[i].e_ex = prefactor * vk * acc;
  });
  for (const PerKTerm& t : out.per_k) out.total += t.e_ex;
  return out;
}

double e_corr_ex(const FermiSystem& system, int k_cutoff, int jobs) {
  return e_corr_ex_per_k(system, k_cutoff, jobs).total;
}

double error_scale(const FermiSystem& system, int k_cutoff) {
  system.validate();
  const double kf = system.kf();
  double acc = 0.0;
  for (const Momentum& k : momentum_shell(k_cutoff)) {
    const double vk = system.vhat(k);
    acc += vk * vk * std::min(std::sqrt(double(k.norm2())), kf);
  }
  return std::sqrt(acc);
}

CorrelationReport correlation_report(const FermiSystem& system, int k_cutoff, int ex_cutoff,
                                     int jobs, double rel_tol) {
  CorrelationReport rep;
  rep.k_cutoff = k_cutoff;
  rep.ex_cutoff = ex_cutoff;
  rep.e_fermi = fermi_energy(system);
  BosResult bos = e_corr_bos(system, k_cutoff, jobs, rel_tol);
  rep.e_bos = bos.total;
  rep.per_k = std::move(bos.per_k);
  ExResult ex = e_corr_ex_per_k(system, ex_cutoff, jobs);
  rep.e_ex = ex.total;
  std::map<Momentum, double> ex_by_k;
  for (const PerKTerm& t : ex.per_k) ex_by_k[t.k] = t.e_ex;
  for (PerKTerm& t : rep.per_k) {
    auto it = ex_by_k.find(t.k);
    if (it != ex_by_k.end()) t.e_ex = it->second;
  }
  rep.error_scale = error_scale(system, k_cutoff);
  const int full = default_cutoff(system);
  if (full > k_cutoff) {
    const double kf = system.kf();
    double tail = 0.0;
    for (const Momentum& k : momentum_shell(full)) {
      if (k.norm2() <= std::int64_t(k_cutoff) * k_cutoff) continue;
      const double vk = system.vhat(k);
      tail += vk * vk * std::sqrt(double(k.norm2()));
    }
    rep.bos_tail_scale = kf * tail;
  }
  return rep;
}

std::vector<AttractiveMargin> attractive_sweep(const FermiSystem& system, double epsilon,
                                               int k_cutoff) {
  system.validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  const FermiBall ball = enumerate_fermi_ball(system.kf2);
  std::vector<AttractiveMargin> out;
  for (const Momentum& k : momentum_shell(k_cutoff)) {
    AttractiveMargin m;
    m.k = k;
    const double vk = system.vhat(k);
    if (vk < 0.0) {
      m.attractive = true;
      double sum_inv = 0.0;
      for (const auto& [tl, count] : lambda_histogram(ball, k))
        sum_inv += double(count) / (0.5 * double(tl));
      m.margin = 1.0 - 2.0 * system.v_entry_sq(k) * sum_inv;
      m.flagged = m.margin <= 0.0;
    } else {
      m.margin = std::numeric_limits<double>::infinity();
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace fg
