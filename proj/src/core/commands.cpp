#include "commands.hpp"

#include <cmath>

#include "correlation.hpp"
#include "parallel.hpp"
#include "plasmon.hpp"
#include "riemann.hpp"

namespace fg {

namespace {

void stamp(ResultTable& t, const RunConfig& cfg) {
  t.config_echo = cfg.echo_text();
  t.version = kToolVersion;
}

std::vector<std::pair<std::int64_t, Momentum>> cells_of(const RunConfig& cfg) {
  std::vector<std::pair<std::int64_t, Momentum>> cells;
  for (std::int64_t kf2 : cfg.kf2_list)
    for (const Momentum& k : cfg.k_list) cells.push_back({kf2, k});
  return cells;
}

}  // namespace

std::string render(const ResultTable& table, const std::string& format) {
  return format == "json" ? render_json(table) : render_csv(table);
}

ResultTable cmd_lune(const RunConfig& cfg) {
  ResultTable t;
  stamp(t, cfg);
  t.columns = {"kf2",         "kx",          "ky",        "kz",
               "lune_size",   "lambda_min",  "lambda_max", "slice_count",
               "max_count_area_dev"};
  const auto cells = cells_of(cfg);
  std::vector<std::vector<Cell>> rows(cells.size());
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    const auto& [kf2, k] = cells[i];
    const Lune lune = enumerate_lune(kf2, k);
    const auto slices = lune_slices(lune);
    double worst = 0.0;
    for (const SliceCountReport& rep : slice_ellipse_report(lune, find_perp_generators(k)))
      worst = std::max(worst, std::abs(double(rep.exact_count) - rep.ellipse_area));
    rows[i] = {std::int64_t(kf2),
               std::int64_t(k.x),
               std::int64_t(k.y),
               std::int64_t(k.z),
               std::int64_t(lune.size()),
               lune.lambda_min(),
               lune.lambda_max(),
               std::int64_t(slices.size()),
               worst};
  });
  for (auto& row : rows) t.add_row(std::move(row));
  return t;
}

ResultTable cmd_riemann(const RunConfig& cfg) {
  ResultTable t;
  stamp(t, cfg);
  t.columns = {"kf2",  "kx",        "ky",          "kz",       "beta",
               "sum",  "slice_sum", "bound_ratio", "predicted", "rel_error"};
  struct Row {
    std::int64_t kf2;
    Momentum k;
    double beta;
  };
  std::vector<Row> rows_in;
  for (std::int64_t kf2 : cfg.kf2_list)
    for (const Momentum& k : cfg.k_list)
      for (double beta : cfg.beta_list) rows_in.push_back({kf2, k, beta});
  std::vector<std::vector<Cell>> rows(rows_in.size());
  parallel_for(rows_in.size(), cfg.jobs, [&](std::size_t i) {
    const Row& r = rows_in[i];
    const Lune lune = enumerate_lune(r.kf2, r.k);
    const double sum = power_sum(lune, r.beta).value;
    const double slice = slice_summation(lune, [&](double lam) { return std::pow(lam, r.beta); });
    Cell ratio = std::string();
    const bool valid = (r.beta >= -1.0 && r.beta <= 0.0) || r.beta >= 1.0;
    if (valid) ratio = check_bounds(lune, r.beta).ratio;
    Cell predicted = std::string(), rel = std::string();
    if (r.beta == -1.0) {
      const double pred = kTwoPi * std::sqrt(double(r.kf2));
      predicted = pred;
      rel = std::abs(sum - pred) / pred;
    }
    rows[i] = {std::int64_t(r.kf2), std::int64_t(r.k.x), std::int64_t(r.k.y),
               std::int64_t(r.k.z), r.beta,              sum,
               slice,               ratio,               predicted,
               rel};
  });
  for (auto& row : rows) t.add_row(std::move(row));
  return t;
}

ResultTable cmd_corr(const RunConfig& cfg) {
  ResultTable t;
  stamp(t, cfg);
  t.columns = {"kf2",  "cutoff", "ex_cutoff",   "e_fermi",       "e_bos",
               "e_ex", "error_scale", "bos_tail_scale"};
  for (std::int64_t kf2 : cfg.kf2_list) {
    FermiSystem sys = cfg.system;
    sys.kf2 = kf2;
    const int cutoff = cfg.cutoff.value_or(default_cutoff(sys));
    const int ex_cutoff = cfg.ex_cutoff.value_or(cutoff);
    const CorrelationReport rep =
        correlation_report(sys, cutoff, ex_cutoff, cfg.jobs, cfg.quad_rel_tol);
    t.add_row({std::int64_t(kf2), std::int64_t(cutoff), std::int64_t(ex_cutoff), rep.e_fermi,
               rep.e_bos, rep.e_ex, rep.error_scale, rep.bos_tail_scale});
  }
  return t;
}

ResultTable cmd_plasmon(const RunConfig& cfg) {
  if (cfg.system.potential.kind != Potential::Kind::Coulomb)
    throw ConfigError("plasmon command requires a coulomb potential");
  ResultTable t;
  stamp(t, cfg);
  t.columns = {"kf2",       "kx",       "ky",           "kz",       "epsilon",
               "predicted", "deviation", "formula_region"};
  const auto rows = dispersion_table(cfg.system.potential.g, cfg.system.s, cfg.kf2_list,
                                     cfg.k_list, cfg.jobs);
  for (const DispersionRow& r : rows)
    t.add_row({std::int64_t(r.kf2), std::int64_t(r.k.x), std::int64_t(r.k.y),
               std::int64_t(r.k.z), r.epsilon, r.predicted, r.deviation,
               std::int64_t(r.formula_region ? 1 : 0)});
  return t;
}

}  // namespace fg
