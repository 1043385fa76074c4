#ifndef GGLOPT_CORE_PROX_HPP_
#define GGLOPT_CORE_PROX_HPP_

#include "core/linalg.hpp"

namespace gglopt {

// Scalar shrinkage: argmin_x tau|x| + (1/2)(x - v)^2 = sign(v) max(|v|-tau, 0).
double soft_threshold(double v, double tau);

// Group shrinkage: argmin_x tau||x|| + (1/2)||x - v||^2
//                = v max(1 - tau/||v||, 0), zero when ||v|| <= tau.
Vector group_soft_threshold(const Vector& v, double tau);

// argmin_X -beta log det X + (1/2)||X - A||_F^2 for symmetric A.
// In the eigenbasis A = Q diag(d) Q^T each eigenvalue solves
// x - beta/x = d, i.e. x = (d + sqrt(d^2 + 4 beta))/2 > 0.
// beta multiplies the -logdet term: an ADMM step with quadratic weight rho
// calls this with beta = 1/rho after dividing the linear term through by rho.
// Scaling the whole subproblem by rho leaves the formula unchanged as long as
// beta is taken from the normalized form, so keep the two consistent.
Matrix prox_log_det(const Matrix& a, double beta);

// argmin_x (1/2)||x - v||^2 + tau sum_{k>=2} |x_k - x_{k-1}|
// (1-D total variation / fused signal approximator). Direct O(n) algorithm
// after Condat (2013); exact up to rounding.
void prox_tv_1d(const double* v, double* out, int n, double tau);
Vector prox_tv_1d(const Vector& v, double tau);

// argmin_x (1/2)||x - v||^2 + l1||x||_1 + l2||x||_2.
// Equals the group prox applied after elementwise soft thresholding.
Vector prox_sparse_group(const Vector& v, double l1, double l2);

// argmin_x (1/2)||x - v||^2 + l1||x||_1 + l2 sum_{k>=2}|x_k - x_{k-1}|.
// Equals elementwise soft thresholding applied after the TV prox.
Vector prox_fused_l1(const Vector& v, double l1, double l2);

// argmin_{X psd} tau tr(X) + (1/2)||X - A||_F^2 for symmetric A:
// eigenvalue shrinkage max(d - tau, 0) in A's eigenbasis. Joint prox of the
// nuclear norm and the PSD indicator (for PSD X the nuclear norm is tr X).
Matrix prox_nuclear_psd(const Matrix& a, double tau);

}  // namespace gglopt

#endif  // GGLOPT_CORE_PROX_HPP_
