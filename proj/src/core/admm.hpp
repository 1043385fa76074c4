#ifndef GGLOPT_CORE_ADMM_HPP_
#define GGLOPT_CORE_ADMM_HPP_

#include <functional>

#include "core/types.hpp"

namespace gglopt {

// Iterates of the consensus splitting Omega = Theta - L. omega carries the
// log-det block, theta the penalty block, dual the scaled multiplier U of the
// consensus constraint. All matrices stay symmetric after a full iteration;
// omega is positive definite by construction of its update.
struct AdmmState {
  MatrixList omega;
  MatrixList theta;
  MatrixList lowrank;
  MatrixList dual;
  double rho = 1.0;
  int iteration = 0;
};

// Called once per completed iteration; used by diagnostics and tests.
using AdmmObserver = std::function<void(const AdmmState&)>;

// Rejects nonpositive rho_init/eps values and max_iter < 1.
void require_valid_options(const SolverOptions& opts);

// General solver behind every penalty family: scaled ADMM on the constraint
// Omega^(k) = Theta^(k) - L^(k), update order Omega, Theta, L, dual.
// Dispatches the Theta block positionwise to the penalty's proximal operator.
// Non-convergence within max_iter yields converged=false, not an exception.
// A warm start (matching dimensions) seeds Theta and L; the dual restarts at
// zero.
Solution solve(const CovarianceSet& cov, const Penalty& pen, const SolverOptions& opts,
               const Solution* warm_start = nullptr, const AdmmObserver& observer = nullptr);

// Single Graphical Lasso: P = lambda1 * sum_{i != j} |Theta_ij|.
Solution solve_sgl(const Matrix& s, int n_samples, double lambda1, const SolverOptions& opts);

// Latent-variable SGL: adds the low-rank component with nuclear weight mu1.
Solution solve_latent_sgl(const Matrix& s, int n_samples, double lambda1, double mu1,
                          const SolverOptions& opts);

// Max-norm of the stationarity violation of the Theta block:
//   max_k || (Theta_k - L_k)^{-1} - S_k - G_k ||_max
// with G_k the nearest element of the penalty subdifferential at Theta,
// computed positionwise per family. Zero at an exact solution; solver
// independent, so usable as an accuracy measure across solvers.
double kkt_residual(const CovarianceSet& cov, const Penalty& pen, const Solution& sol);

}  // namespace gglopt

#endif  // GGLOPT_CORE_ADMM_HPP_
