#include "plasmon.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace fg {

namespace {

// Aggregated carrier of h^2 + 2 P_w, w = h^{1/2} v: the lune's h is highly
// degenerate, so everything is reduced to the distinct lambda values with
// multiplicities.  The invariant subspace spanned by the per-group uniform
// vectors contains both v and the top eigenvector.
struct Aggregated {
  std::vector<double> lambda;   // distinct values, ascending
  std::vector<double> mult;     // multiplicities
  double v0 = 0.0;              // common entry of v
  std::int64_t total = 0;

  double vhv() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) acc += mult[j] * lambda[j];
    return v0 * v0 * acc;
  }
  double vh3v() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j)
      acc += mult[j] * lambda[j] * lambda[j] * lambda[j];
    return v0 * v0 * acc;
  }
};

Aggregated aggregate(const FermiSystem& system, const Momentum& k) {
  const FermiBall ball = enumerate_fermi_ball(system.kf2);
  Aggregated agg;
  for (const auto& [tl, count] : lambda_histogram(ball, k)) {
    agg.lambda.push_back(0.5 * double(tl));
    agg.mult.push_back(double(count));
    agg.total += count;
  }
  agg.v0 = std::sqrt(system.v_entry_sq(k));
  return agg;
}

}  // namespace

std::vector<double> PlasmonMode::phi_over_lune(const Lune& lune) const {
  std::vector<double> out(lune.size());
  for (std::size_t i = 0; i < lune.size(); ++i) out[i] = phi_at_lambda(lune.lambda(i));
  return out;
}

double PlasmonMode::phi_at_lambda(double lambda) const {
  auto it = std::lower_bound(group_lambda.begin(), group_lambda.end(), lambda - 1e-9);
  if (it == group_lambda.end() || std::abs(*it - lambda) > 1e-9)
    throw Error("lambda = " + std::to_string(lambda) + " not among the mode's groups");
  return phi[std::size_t(it - group_lambda.begin())];
}

PlasmonMode compute_mode(const FermiSystem& system, const Momentum& k) {
  system.validate();
  if (k.is_zero()) throw ConfigError("plasmon mode is undefined for k = 0");
  if (system.mean_field)
    throw ConfigError("plasmon modes are computed in the unscaled regime (mean_field = false)");
  if (!(system.vhat(k) >= 0.0))
    throw ConfigError("plasmon mode requires V_k >= 0 at k = " + to_string(k));

  const Aggregated agg = aggregate(system, k);
  const std::size_t m = agg.lambda.size();
  if (m == 0) throw Error("empty lune for k = " + to_string(k));

  // the eigensolver route: h^2 + 2 w w^T restricted to the group-uniform
  // subspace, with x_J the normalized indicator of group J
  Eigen::MatrixXd small(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double wi = std::sqrt(agg.lambda[i] * agg.mult[i]) * agg.v0;
      const double wj = std::sqrt(agg.lambda[j] * agg.mult[j]) * agg.v0;
      small(Eigen::Index(i), Eigen::Index(j)) =
          (i == j ? agg.lambda[i] * agg.lambda[i] : 0.0) + 2.0 * wi * wj;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(small);
  const Eigen::VectorXd evals = es.eigenvalues();
  const double top = evals[Eigen::Index(m) - 1];
  Eigen::VectorXd psi = es.eigenvectors().col(Eigen::Index(m) - 1);

  PlasmonMode mode;
  mode.k = k;
  mode.lune_size = agg.total;
  mode.lambda_max = agg.lambda.back();
  mode.vhv = agg.vhv();
  mode.vh3v = agg.vh3v();
  mode.epsilon = 2.0 * std::sqrt(top);

  // second eigenvalue of the full operator: groups of multiplicity >= 2 keep
  // lambda^2 in the spectrum besides the aggregated eigenvalues
  double second = m >= 2 ? evals[Eigen::Index(m) - 2] : -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j)
    if (agg.mult[j] >= 2.0) second = std::max(second, agg.lambda[j] * agg.lambda[j]);
  mode.degenerate = top - second <= 1e-9 * std::max(top, 1.0);
  mode.formula_region = top > mode.lambda_max * mode.lambda_max + 1e-9 && !mode.degenerate;

  // sign convention: <h^{1/2} v, phi> >= 0
  double overlap = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    overlap += std::sqrt(agg.lambda[j] * agg.mult[j]) * agg.v0 * psi[Eigen::Index(j)];
  if (overlap < 0.0) psi = -psi;

  // per-point components: group value / sqrt(multiplicity)
  mode.group_lambda = agg.lambda;
  mode.phi.resize(m);
  double norm2 = 0.0, inf = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    mode.phi[j] = psi[Eigen::Index(j)] / std::sqrt(agg.mult[j]);
    norm2 += agg.mult[j] * mode.phi[j] * mode.phi[j];
    inf = std::max(inf, std::abs(mode.phi[j]));
  }
  const double norm = std::sqrt(norm2);
  for (double& x : mode.phi) x /= norm;
  mode.phi_inf = inf / norm;

  // full-space eigenpair residual, computed in the aggregated coordinates
  {
    double wdotphi = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      wdotphi += std::sqrt(agg.lambda[j]) * agg.v0 * agg.mult[j] * mode.phi[j];
    double res2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double r = (agg.lambda[j] * agg.lambda[j] - top) * mode.phi[j] +
                       2.0 * wdotphi * std::sqrt(agg.lambda[j]) * agg.v0;
      res2 += agg.mult[j] * r * r;
    }
    mode.eigen_residual = std::sqrt(res2) / top;
  }

  if (mode.formula_region) {
    // cross-check against phi_i ~ sqrt(lambda_i)/(eps - lambda_i^2) v_i
    std::vector<double> cf(m);
    double cf_norm2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      cf[j] = std::sqrt(agg.lambda[j]) * agg.v0 / (top - agg.lambda[j] * agg.lambda[j]);
      cf_norm2 += agg.mult[j] * cf[j] * cf[j];
    }
    const double cf_norm = std::sqrt(cf_norm2);
    double dev = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      dev = std::max(dev, std::abs(mode.phi[j] - cf[j] / cf_norm));
    mode.closed_form_deviation = dev;
  }

  mode.gap_to_formula =
      mode.epsilon - 2.0 * std::sqrt(2.0 * mode.vhv + (mode.vhv > 0.0 ? mode.vh3v / mode.vhv : 0.0));
  mode.delocalization_ok = mode.phi_inf * std::sqrt(double(agg.total)) <= 10.0;
  return mode;
}

ModeThreshold mode_threshold(const FermiSystem& system, const Momentum& k) {
  system.validate();
  if (k.is_zero()) throw ConfigError("mode threshold is undefined for k = 0");
  const Aggregated agg = aggregate(system, k);
  ModeThreshold out;
  out.lhs = 2.0 * agg.vhv();
  out.rhs = agg.lambda.empty() ? 0.0 : agg.lambda.back() * agg.lambda.back();
  out.satisfied = out.lhs > out.rhs;
  return out;
}

std::vector<DispersionRow> dispersion_table(double g, int s,
                                            const std::vector<std::int64_t>& kf2_list,
                                            const std::vector<Momentum>& k_list, int jobs) {
  if (!(g > 0.0)) throw ConfigError("dispersion table requires a Coulomb coupling g > 0");
  std::vector<std::pair<std::int64_t, Momentum>> cells;
  for (std::int64_t kf2 : kf2_list)
    for (const Momentum& k : k_list) cells.push_back({kf2, k});
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.norm2() != b.second.norm2()) return a.second.norm2() < b.second.norm2();
    return a.second < b.second;
  });
  std::vector<DispersionRow> rows(cells.size());
  parallel_for(cells.size(), jobs, [&](std::size_t i) {
    const auto& [kf2, k] = cells[i];
    FermiSystem sys;
    sys.kf2 = kf2;
    sys.s = s;
    sys.mean_field = false;
    sys.potential = Potential::coulomb(g);
    const PlasmonMode mode = compute_mode(sys, k);
    const double nball = double(enumerate_fermi_ball(kf2).size());
    const double density = double(s) * nball / kTwoPiCubed;
    DispersionRow row;
    row.kf2 = kf2;
    row.k = k;
    row.epsilon = mode.epsilon;
    row.predicted = std::sqrt(2.0 * g * density + 2.4 * double(kf2) * double(k.norm2()));
    row.deviation = std::abs(row.epsilon - row.predicted) / row.predicted;
    row.formula_region = mode.formula_region;
    rows[i] = row;
  });
  return rows;
}

}  // namespace fg
