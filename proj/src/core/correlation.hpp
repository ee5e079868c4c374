#ifndef FG_CORRELATION_HPP
#define FG_CORRELATION_HPP

#include <optional>
#include <vector>

#include "kernel.hpp"
#include "system.hpp"

namespace fg {

// All momenta of Z^3_* with |k| <= cutoff, sorted by (|k|^2, lex).  This is
// the fixed summation order of every sweep.
std::vector<Momentum> momentum_shell(int cutoff);

// Default sweep cutoff: 2*ceil(kF) plus the compact support radius of V.
int default_cutoff(const FermiSystem& system);

double fermi_energy(const FermiSystem& system);

struct PerKTerm {
  Momentum k;
  double e_bos = 0.0;
  double e_ex = 0.0;
};

struct CorrelationReport {
  double e_fermi = 0.0;
  double e_bos = 0.0;
  double e_ex = 0.0;
  double error_scale = 0.0;
  // kF sum_{cutoff < |k| <= 2 ceil(kF) + support} V_k^2 |k|, the shape of the
  // per-mode trace bound; a scale for the un-summed bosonic tail (constant
  // omitted).  Zero when the cutoff already covers the potential's support.
  double bos_tail_scale = 0.0;
  int k_cutoff = 0;
  int ex_cutoff = 0;
  std::vector<PerKTerm> per_k;
};

// Bosonic contribution 1/pi sum_k int F(...) dt over 0 < |k| <= cutoff; every
// mode must be admissible.  Per-k terms are returned in summation order.
struct BosResult {
  double total = 0.0;
  std::vector<PerKTerm> per_k;
};
BosResult e_corr_bos(const FermiSystem& system, int k_cutoff, int jobs = 1,
                     double rel_tol = 1e-10);

// Exchange contribution via the reduced form: l = p+q-k is never cutoff
// restricted, only the outer k is.
double e_corr_ex(const FermiSystem& system, int k_cutoff, int jobs = 1);

struct ExResult {
  double total = 0.0;
  std::vector<PerKTerm> per_k;  // e_ex filled, e_bos zero
};
ExResult e_corr_ex_per_k(const FermiSystem& system, int k_cutoff, int jobs = 1);

double error_scale(const FermiSystem& system, int k_cutoff);

CorrelationReport correlation_report(const FermiSystem& system, int k_cutoff, int ex_cutoff,
                                     int jobs = 1, double rel_tol = 1e-10);

struct AttractiveMargin {
  Momentum k;
  bool attractive = false;  // margin only meaningful when V_k < 0
  double margin = 0.0;      // 1 - 2<v_k, h_k^-1 v_k>
  bool flagged = false;     // non-positive margin
};
std::vector<AttractiveMargin> attractive_sweep(const FermiSystem& system, double epsilon,
                                               int k_cutoff);

}  // namespace fg

#endif
