#include "core/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/prox.hpp"
#include "core/select.hpp"

namespace gglopt {

void require_valid_options(const SolverOptions& opts) {
  if (opts.rho_init <= 0.0) throw InvalidInputError("rho_init must be positive");
  if (opts.max_iter < 1) throw InvalidInputError("max_iter must be at least 1");
  if (opts.eps_abs <= 0.0 || opts.eps_rel <= 0.0) {
    throw InvalidInputError("eps_abs and eps_rel must be positive");
  }
}

namespace {

// Theta block: positionwise prox over the upper triangle, mirrored into the
// lower one, diagonal copied unshrunk.
void update_theta(const Penalty& pen, const MatrixList& v, double rho, MatrixList& theta) {
  const int k_count = static_cast<int>(v.size());
  const Eigen::Index p = v[0].rows();
  const double l1 = pen.lambda1 / rho;
  const double l2 = pen.lambda2 / rho;

  for (int k = 0; k < k_count; ++k) theta[k].diagonal() = v[k].diagonal();

  if (pen.family == PenaltyFamily::SGL) {
    const Matrix& vk = v[0];
    Matrix& tk = theta[0];
    for (Eigen::Index j = 1; j < p; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double x = soft_threshold(vk(i, j), l1);
        tk(i, j) = x;
        tk(j, i) = x;
      }
    }
    return;
  }

  Vector a(k_count);
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      for (int k = 0; k < k_count; ++k) a[k] = v[k](i, j);
      const Vector x = pen.family == PenaltyFamily::GGL ? prox_sparse_group(a, l1, l2)
                                                        : prox_fused_l1(a, l1, l2);
      for (int k = 0; k < k_count; ++k) {
        theta[k](i, j) = x[k];
        theta[k](j, i) = x[k];
      }
    }
  }
}

Solution admm_solve(const CovarianceSet& cov, const Penalty& pen, const SolverOptions& opts,
                    const Solution* warm_start, const AdmmObserver& observer) {
  const auto t_start = std::chrono::steady_clock::now();
  const int k_count = cov.instances();
  const Eigen::Index p = cov.dim();
  const bool latent = pen.latent;

  AdmmState st;
  st.rho = opts.rho_init;
  st.omega.assign(k_count, Matrix::Zero(p, p));
  st.theta.assign(k_count, Matrix::Identity(p, p));
  st.lowrank.assign(k_count, Matrix::Zero(p, p));
  st.dual.assign(k_count, Matrix::Zero(p, p));
  if (warm_start != nullptr && warm_start->instances() == k_count && warm_start->dim() == p) {
    st.theta = warm_start->theta;
    if (latent && static_cast<int>(warm_start->lowrank.size()) == k_count) {
      st.lowrank = warm_start->lowrank;
    }
  }

  MatrixList v(k_count, Matrix::Zero(p, p));         // Theta-block argument
  MatrixList diff(k_count), prev_diff(k_count);      // Theta - L
  for (int k = 0; k < k_count; ++k) prev_diff[k] = st.theta[k] - st.lowrank[k];

  const double sqrt_dim = std::sqrt(static_cast<double>(k_count) * p * p);
  double r_norm = 0.0, s_norm = 0.0;
  bool converged = false;

  for (st.iteration = 1; st.iteration <= opts.max_iter; ++st.iteration) {
    // Omega: prox of (1/rho)(-logdet) at Theta - L - U - S/rho.
    for (int k = 0; k < k_count; ++k) {
      st.omega[k] = prox_log_det(
          st.theta[k] - st.lowrank[k] - st.dual[k] - cov.matrices[k] / st.rho, 1.0 / st.rho);
      symmetrize(st.omega[k]);
    }

    // Theta: penalty prox at Omega + L + U.
    for (int k = 0; k < k_count; ++k) v[k] = st.omega[k] + st.lowrank[k] + st.dual[k];
    update_theta(pen, v, st.rho, st.theta);

    // L: nuclear/PSD prox at Theta - Omega - U.
    if (latent) {
      for (int k = 0; k < k_count; ++k) {
        st.lowrank[k] = prox_nuclear_psd(st.theta[k] - st.omega[k] - st.dual[k],
                                         pen.mu1[k] / st.rho);
        symmetrize(st.lowrank[k]);
      }
    }

    for (int k = 0; k < k_count; ++k) st.dual[k] += st.omega[k] - st.theta[k] + st.lowrank[k];

    double r_sq = 0.0;
    for (int k = 0; k < k_count; ++k) {
      r_sq += (st.omega[k] - st.theta[k] + st.lowrank[k]).squaredNorm();
      diff[k] = st.theta[k] - st.lowrank[k];
    }
    r_norm = std::sqrt(r_sq);
    s_norm = st.rho * stacked_diff_norm(diff, prev_diff);
    std::swap(prev_diff, diff);

    const double eps_pri = sqrt_dim * opts.eps_abs +
                           opts.eps_rel * std::max(stacked_norm(st.omega), stacked_norm(prev_diff));
    const double eps_dual =
        sqrt_dim * opts.eps_abs + opts.eps_rel * st.rho * stacked_norm(st.dual);

    if (observer) observer(st);

    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      converged = true;
      break;
    }

    // Residual balancing; the scaled dual is rescaled with rho.
    if (opts.adaptive_rho) {
      if (r_norm > 10.0 * s_norm && st.rho < 1e6) {
        st.rho *= 2.0;
        for (Matrix& u : st.dual) u *= 0.5;
      } else if (s_norm > 10.0 * r_norm && st.rho > 1e-6) {
        st.rho *= 0.5;
        for (Matrix& u : st.dual) u *= 2.0;
      }
    }
  }

  Solution out;
  out.theta = std::move(st.theta);
  out.lowrank = std::move(st.lowrank);
  out.diagnostics.iterations = std::min(st.iteration, opts.max_iter);
  out.diagnostics.primal_residual = r_norm;
  out.diagnostics.dual_residual = s_norm;
  out.diagnostics.converged = converged;
  try {
    out.diagnostics.objective_value =
        objective(cov, pen, out.theta, latent ? out.lowrank : MatrixList{});
  } catch (const DomainError&) {
    // Theta - L can leave the PD cone when the solve is cut off early.
    out.diagnostics.objective_value = std::numeric_limits<double>::infinity();
  }
  out.diagnostics.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace

Solution solve(const CovarianceSet& cov, const Penalty& pen, const SolverOptions& opts,
               const Solution* warm_start, const AdmmObserver& observer) {
  require_valid(cov);
  require_compatible(cov, pen);
  require_valid_options(opts);

  if (!opts.scale_to_correlation) {
    return admm_solve(cov, pen, opts, warm_start, observer);
  }

  // Solve on the correlation scale, then map back Theta_orig = D^-1 Theta D^-1.
  const auto t_start = std::chrono::steady_clock::now();
  CovarianceSet scaled;
  scaled.sample_counts = cov.sample_counts;
  std::vector<Vector> scales;
  scaled.matrices.reserve(cov.instances());
  for (const Matrix& s : cov.matrices) {
    auto [r, d] = scale_to_correlation(s);
    scaled.matrices.push_back(std::move(r));
    scales.push_back(std::move(d));
  }

  SolverOptions inner = opts;
  inner.scale_to_correlation = false;

  Solution warm_scaled;
  const Solution* warm_ptr = nullptr;
  if (warm_start != nullptr && warm_start->instances() == cov.instances() &&
      warm_start->dim() == cov.dim()) {
    warm_scaled = *warm_start;
    for (int k = 0; k < warm_scaled.instances(); ++k) {
      const auto d = scales[k].asDiagonal();
      warm_scaled.theta[k] = d * warm_scaled.theta[k] * d;
      warm_scaled.lowrank[k] = d * warm_scaled.lowrank[k] * d;
    }
    warm_ptr = &warm_scaled;
  }

  Solution sol = admm_solve(scaled, pen, inner, warm_ptr, observer);
  for (int k = 0; k < sol.instances(); ++k) {
    const auto dinv = scales[k].cwiseInverse().asDiagonal();
    sol.theta[k] = dinv * sol.theta[k] * dinv;
    symmetrize(sol.theta[k]);
    sol.lowrank[k] = dinv * sol.lowrank[k] * dinv;
    symmetrize(sol.lowrank[k]);
  }
  try {
    sol.diagnostics.objective_value =
        objective(cov, pen, sol.theta, pen.latent ? sol.lowrank : MatrixList{});
  } catch (const DomainError&) {
    sol.diagnostics.objective_value = std::numeric_limits<double>::infinity();
  }
  sol.diagnostics.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return sol;
}

Solution solve_sgl(const Matrix& s, int n_samples, double lambda1, const SolverOptions& opts) {
  return solve(CovarianceSet(s, n_samples), Penalty::sgl(lambda1), opts);
}

Solution solve_latent_sgl(const Matrix& s, int n_samples, double lambda1, double mu1,
                          const SolverOptions& opts) {
  return solve(CovarianceSet(s, n_samples), Penalty::latent_sgl(lambda1, mu1), opts);
}

namespace {

constexpr double kSupportTol = 1e-14;  // iterate entries are exact zeros from the prox

double clip_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Nearest element of lambda1 d||.||_1 + lambda2 d||.||_2 at theta to r.
Vector nearest_subgradient_group(const Vector& theta, const Vector& r, double l1, double l2) {
  const Eigen::Index n = theta.size();
  Vector g(n);
  const double norm = theta.norm();
  if (norm > kSupportTol) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double base = l2 * theta[k] / norm;
      if (std::abs(theta[k]) > kSupportTol) {
        g[k] = base + l1 * (theta[k] > 0 ? 1.0 : -1.0);
      } else {
        g[k] = base + (l1 > 0.0 ? std::clamp(r[k] - base, -l1, l1) : 0.0);
      }
    }
    return g;
  }
  // theta = 0: the set is the Minkowski sum of the l1 box and the l2 ball;
  // project by clamping to the box and shrinking the remainder onto the ball.
  Vector boxed(n);
  for (Eigen::Index k = 0; k < n; ++k) boxed[k] = std::clamp(r[k], -l1, l1);
  const Vector rem = r - boxed;
  const double rem_norm = rem.norm();
  if (rem_norm <= l2) return r;  // r is inside the subdifferential
  return boxed + (l2 / rem_norm) * rem;
}

// Nearest element of lambda1 d||.||_1 + lambda2 d(TV) at theta to r, via exact
// coordinate descent on the free (inactive-sign) coordinates.
Vector nearest_subgradient_fused(const Vector& theta, const Vector& r, double l1, double l2) {
  const Eigen::Index n = theta.size();
  Vector u = Vector::Zero(n);          // l1 subgradient, in [-1,1]
  Vector w = Vector::Zero(n - 1 > 0 ? n - 1 : 0);  // TV subgradient
  std::vector<bool> u_free(n, false), w_free(std::max<Eigen::Index>(n - 1, 0), false);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(theta[k]) > kSupportTol) {
      u[k] = theta[k] > 0 ? 1.0 : -1.0;
    } else {
      u_free[k] = true;
    }
  }
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    const double d = theta[j + 1] - theta[j];
    if (std::abs(d) > kSupportTol) {
      w[j] = d > 0 ? 1.0 : -1.0;
    } else {
      w_free[j] = true;
    }
  }

  auto dtw = [&](Eigen::Index k) {  // (D^T w)_k = w_{k-1} - w_k with boundary zeros
    double val = 0.0;
    if (k > 0) val += w[k - 1];
    if (k + 1 < n) val -= w[k];
    return val;
  };

  for (int sweep = 0; sweep < 500; ++sweep) {
    double change = 0.0;
    if (l1 > 0.0) {
      for (Eigen::Index k = 0; k < n; ++k) {
        if (!u_free[k]) continue;
        const double target = clip_unit((r[k] - l2 * dtw(k)) / l1);
        change = std::max(change, std::abs(target - u[k]));
        u[k] = target;
      }
    }
    if (l2 > 0.0) {
      for (Eigen::Index j = 0; j + 1 < n; ++j) {
        if (!w_free[j]) continue;
        // residual components j and j+1 depend on w_j linearly
        const double a = r[j] - l1 * u[j] - (j > 0 ? l2 * w[j - 1] : 0.0);
        const double b = r[j + 1] - l1 * u[j + 1] + (j + 2 < n ? l2 * w[j + 1] : 0.0);
        const double target = clip_unit((b - a) / (2.0 * l2));
        change = std::max(change, std::abs(target - w[j]));
        w[j] = target;
      }
    }
    if (change < 1e-14) break;
  }

  Vector g(n);
  for (Eigen::Index k = 0; k < n; ++k) g[k] = l1 * u[k] + l2 * dtw(k);
  return g;
}

}  // namespace

double kkt_residual(const CovarianceSet& cov, const Penalty& pen, const Solution& sol) {
  const int k_count = cov.instances();
  const Eigen::Index p = cov.dim();
  if (sol.instances() != k_count || sol.dim() != p) {
    throw InvalidInputError("solution dimensions do not match the covariance set");
  }

  MatrixList resid(k_count);
  for (int k = 0; k < k_count; ++k) {
    const Matrix diff = sol.lowrank.empty() ? sol.theta[k] : Matrix(sol.theta[k] - sol.lowrank[k]);
    Eigen::LLT<Matrix> llt(diff);
    if (llt.info() != Eigen::Success) {
      throw NumericError("Theta - L is singular or indefinite in instance " + std::to_string(k));
    }
    resid[k] = llt.solve(Matrix::Identity(p, p)) - cov.matrices[k];
  }

  double worst = 0.0;
  // Diagonal entries carry no penalty: the subgradient is zero there.
  for (int k = 0; k < k_count; ++k) {
    worst = std::max(worst, resid[k].diagonal().cwiseAbs().maxCoeff());
  }

  Vector th(k_count), r(k_count), g(k_count);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (i == j) continue;
      for (int k = 0; k < k_count; ++k) {
        th[k] = sol.theta[k](i, j);
        r[k] = resid[k](i, j);
      }
      switch (pen.family) {
        case PenaltyFamily::SGL:
        case PenaltyFamily::GGL:
          g = nearest_subgradient_group(
              th, r, pen.lambda1, pen.family == PenaltyFamily::GGL ? pen.lambda2 : 0.0);
          break;
        case PenaltyFamily::FGL:
          g = nearest_subgradient_fused(th, r, pen.lambda1, pen.lambda2);
          break;
      }
      worst = std::max(worst, (r - g).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace gglopt
