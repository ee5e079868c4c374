#ifndef FG_OPERATORS_HPP
#define FG_OPERATORS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "common.hpp"

namespace fg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }
inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

// f(A) through a single symmetric eigendecomposition.  The result is
// re-symmetrized; f throwing on an eigenvalue is reported with that value.
Matrix sym_func(const Matrix& a, const std::function<double(double)>& f,
                const std::string& fname = "f");

Matrix sym_sqrt(const Matrix& a);
Matrix sym_log(const Matrix& a);
Matrix sym_exp(const Matrix& a);
Matrix sym_inv_sqrt(const Matrix& a);

// (A + g P_w)^{-1} from A^{-1}: A^{-1} - g/(1+g<w,A^{-1}w>) P_{A^{-1}w}.
// Throws when the update is singular (|1+g<w,A^{-1}w>| <= 1e-12).
Matrix sherman_morrison(const Matrix& a_inv, double g, const Vector& w);

// (A + g P_w)^{1/2} through the rank-one integral representation
//   A^{1/2} + (2g/pi) int_0^inf t^2/(1+g<w,(A+t^2)^{-1}w>) P_{(A+t^2)^{-1}w} dt.
// Requires A + g P_w > 0.
Matrix rank_one_sqrt(const Matrix& a, double g, const Vector& w, double rel_tol = 1e-10);

// tr((A+gP_w)^{1/2}) - tr(A^{1/2}) = (1/pi) int_0^inf log(1+g<w,(A+t^2)^{-1}w>) dt.
double rank_one_sqrt_trace_increment(const Matrix& a, double g, const Vector& w,
                                     double rel_tol = 1e-10);

}  // namespace fg

#endif
