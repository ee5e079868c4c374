#ifndef FG_KERNEL_HPP
#define FG_KERNEL_HPP

#include <string>
#include <vector>

#include "geometry.hpp"
#include "operators.hpp"
#include "system.hpp"

namespace fg {

// One-body content of the Bogolubov transformation for a single momentum k:
// the diagonal h, the uniform vector v, the kernel K and the operators built
// from it.  Everything lives on l^2(L_k) in the lune's lexicographic order.
struct KernelBundle {
  Momentum k;
  Lune lune;
  double vhat = 0.0;
  int sign = 0;           // sgn(V_k); 0 for V_k = 0
  Vector lambda;          // diagonal of h_k
  Vector v;               // entries sqrt(s|V_k|c/(2(2pi)^3)), all equal
  Matrix K;               // Bogolubov kernel
  Matrix Etilde;          // (h^2 + 2 sign P_{h^{1/2}v})^{1/2}
  Matrix E;               // e^{-K} h e^{-K}
  Matrix U;               // (h^{1/2} e^{-2K} h^{1/2})^{1/2} h^{-1/2} e^K
  Matrix expK, expmK;     // e^{K}, e^{-K}
  double vhinv = 0.0;     // <v, h^{-1} v>
  double admissibility_margin = 0.0;  // 1 - 2<v,h^{-1}v>, meaningful for V_k < 0
  bool admissible = true;

  std::size_t dim() const { return std::size_t(lambda.size()); }
  Matrix h() const { return Matrix(lambda.asDiagonal()); }
  Matrix p_op() const { return sign == 0 ? Matrix::Zero(lambda.size(), lambda.size())
                                         : Matrix(double(sign) * (v * v.transpose())); }
};

struct BuildOptions {
  bool flip_kernel_sign = false;  // fault injection hook for the verify suite
};

KernelBundle build_kernel_bundle(const FermiSystem& system, const Momentum& k,
                                 const BuildOptions& opts = {});

// Same construction from an abstract (h, v, sign) triple; used by the random
// instance grids where no lattice structure is wanted.
KernelBundle build_kernel_bundle_raw(const Vector& lambda, const Vector& v, int sign,
                                     const BuildOptions& opts = {});

// tr(E - h - sign P_v) against (1/pi) int F(2 sign <v,h(h^2+t^2)^{-1}v>) dt.
struct TraceCheck {
  double lhs = 0.0, rhs = 0.0;
};
TraceCheck trace_formula_check(const KernelBundle& b, double rel_tol = 1e-10);

// A_k(t), B_k(t) of the diagonalization theorem.
struct Interpolants {
  Matrix a, b;
};
Interpolants interpolants(const KernelBundle& b, double t);

// 21-node composite Simpson of t -> B(t) over [0, 1].
Matrix integral_b(const KernelBundle& b);

// max_{p,q} |e^K(h+2P)e^K - e^{-K}he^{-K}|_{pq}, the diagonalization residual.
double diagonalization_residual(const KernelBundle& b);

struct BoundReport {
  std::string bound_name;
  double max_violation = 0.0;  // <= 0 means the inequality holds
  int worst_i = -1, worst_j = -1;
};
// Every matrix-element inequality family (repulsive) / their attractive
// variants, evaluated at t in {0, 0.25, 0.5, 0.75, 1}.
std::vector<BoundReport> verify_element_bounds(const KernelBundle& b);

struct HsNorms {
  double k_hs = 0.0;
  double etilde_minus_h_hs = 0.0;
  bool inequality_holds = false;  // |Etilde-h|_HS^2 <= min{2<v,hv>, |v|^4}
  double margin = 0.0;
};
HsNorms hs_norms(const KernelBundle& b);

// max over p,q of |(I K_k I - K_{-k})_{pq}| where I e_p = e_{-p}; checks the
// negation symmetry <e_p, K_k e_q> = <e_{-p}, K_{-k} e_{-q}>.
double negation_symmetry_defect(const KernelBundle& plus, const KernelBundle& minus);

}  // namespace fg

#endif
