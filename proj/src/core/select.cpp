#include "core/select.hpp"

#include <cmath>
#include <limits>

#include "core/admm.hpp"
#include "core/errors.hpp"

namespace gglopt {

int count_edges(const Matrix& theta, double tol) {
  int edges = 0;
  for (Eigen::Index j = 1; j < theta.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (std::abs(theta(i, j)) > tol) ++edges;
    }
  }
  return edges;
}

double ebic(const CovarianceSet& cov, const MatrixList& precision, const MatrixList& sparsity,
            double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw InvalidInputError("gamma must lie in [0, 1]");
  const int k_count = cov.instances();
  const double log_p = std::log(static_cast<double>(cov.dim()));
  double score = 0.0;
  for (int k = 0; k < k_count; ++k) {
    const double n = static_cast<double>(cov.sample_counts[k]);
    const double fit =
        (cov.matrices[k].cwiseProduct(precision[k])).sum() - logdet_pd(precision[k], k);
    const double edges = static_cast<double>(count_edges(sparsity[k]));
    score += n * fit + edges * std::log(n) + 4.0 * edges * gamma * log_p;
  }
  return score;
}

double ebic(const CovarianceSet& cov, const MatrixList& theta, double gamma) {
  return ebic(cov, theta, theta, gamma);
}

std::vector<double> default_lambda_grid(const CovarianceSet& cov, int count) {
  if (count < 2) throw InvalidInputError("grid needs at least 2 points");
  double lambda_max = 0.0;
  for (const Matrix& s : cov.matrices) {
    for (Eigen::Index j = 1; j < s.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        lambda_max = std::max(lambda_max, std::abs(s(i, j)));
      }
    }
  }
  if (lambda_max <= 0.0) lambda_max = 1.0;
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = lambda_max * std::pow(100.0, -static_cast<double>(i) / (count - 1));
  }
  return grid;
}

namespace {

struct GridPoint {
  double lambda1, lambda2, mu1;
  bool latent;
};

// Sparser-model preference for eBIC ties.
bool prefer(const GridPoint& a, const GridPoint& b) {
  if (a.lambda1 != b.lambda1) return a.lambda1 > b.lambda1;
  if (a.lambda2 != b.lambda2) return a.lambda2 > b.lambda2;
  return a.mu1 > b.mu1;
}

}  // namespace

SelectionReport grid_search(const CovarianceSet& cov, PenaltyFamily family,
                            const ParameterGrid& grid, const SolverOptions& opts) {
  require_valid(cov);
  if (grid.lambda1_values.empty()) throw InvalidInputError("lambda1 grid is empty");
  for (std::size_t i = 1; i < grid.lambda1_values.size(); ++i) {
    if (grid.lambda1_values[i] >= grid.lambda1_values[i - 1]) {
      throw InvalidInputError("lambda1 grid must be strictly descending");
    }
  }
  if (family == PenaltyFamily::SGL && !grid.lambda2_values.empty()) {
    throw InvalidInputError("lambda2 grid does not apply to SGL");
  }
  if (grid.gamma < 0.0 || grid.gamma > 1.0) throw InvalidInputError("gamma must lie in [0, 1]");

  const bool latent = !grid.mu1_values.empty();
  const std::vector<double> l2s =
      grid.lambda2_values.empty() ? std::vector<double>{0.0} : grid.lambda2_values;
  const std::vector<double> mus = latent ? grid.mu1_values : std::vector<double>{0.0};

  SelectionReport report;
  Solution warm;
  bool have_warm = false;

  int best_idx = -1;
  GridPoint best_point{0, 0, 0, latent};
  double best_score = std::numeric_limits<double>::infinity();
  Solution best_solution;

  for (double l1 : grid.lambda1_values) {
    for (double l2 : l2s) {
      for (double mu : mus) {
        Penalty pen;
        pen.family = family;
        pen.lambda1 = l1;
        pen.lambda2 = family == PenaltyFamily::SGL ? 0.0 : l2;
        pen.latent = latent;
        if (latent) pen.mu1.assign(cov.instances(), mu);

        Solution sol = solve(cov, pen, opts, have_warm ? &warm : nullptr);

        SelectionEntry entry;
        entry.lambda1 = l1;
        entry.lambda2 = pen.lambda2;
        entry.mu1 = latent ? mu : 0.0;
        entry.converged = sol.diagnostics.converged;
        entry.edge_counts.reserve(sol.instances());
        for (const Matrix& t : sol.theta) entry.edge_counts.push_back(count_edges(t));
        if (!entry.converged) {
          entry.ebic_score = std::numeric_limits<double>::infinity();
        } else {
          try {
            if (latent) {
              MatrixList precision(sol.instances());
              for (int k = 0; k < sol.instances(); ++k) {
                precision[k] = sol.theta[k] - sol.lowrank[k];
              }
              entry.ebic_score = ebic(cov, precision, sol.theta, grid.gamma);
            } else {
              entry.ebic_score = ebic(cov, sol.theta, grid.gamma);
            }
          } catch (const DomainError&) {
            // Theta left the PD cone by round-off; score it out of contention.
            entry.ebic_score = std::numeric_limits<double>::infinity();
            entry.converged = false;
          }
        }

        const int idx = static_cast<int>(report.entries.size());
        const GridPoint point{l1, entry.lambda2, entry.mu1, latent};
        if (entry.converged &&
            (entry.ebic_score < best_score - 1e-9 ||
             (std::abs(entry.ebic_score - best_score) <= 1e-9 && prefer(point, best_point)))) {
          best_score = entry.ebic_score;
          best_idx = idx;
          best_point = point;
          best_solution = sol;
        }
        report.entries.push_back(std::move(entry));

        warm = std::move(sol);
        have_warm = true;
      }
    }
  }

  if (best_idx < 0) throw SelectionError(std::move(report));

  // Pin down the reported edges with a tighter final solve.
  Penalty pen;
  pen.family = family;
  pen.lambda1 = best_point.lambda1;
  pen.lambda2 = best_point.lambda2;
  pen.latent = latent;
  if (latent) pen.mu1.assign(cov.instances(), best_point.mu1);
  SolverOptions tight = opts;
  tight.eps_abs = opts.eps_abs / 10.0;
  report.best = best_idx;
  report.solution = solve(cov, pen, tight, &best_solution);
  return report;
}

std::pair<Matrix, Vector> scale_to_correlation(const Matrix& s) {
  if (s.diagonal().minCoeff() <= 0.0) {
    throw InvalidInputError("correlation scaling needs a positive diagonal");
  }
  const Vector d = s.diagonal().cwiseSqrt();
  Matrix r = d.cwiseInverse().asDiagonal() * s * d.cwiseInverse().asDiagonal();
  r.diagonal().setOnes();
  symmetrize(r);
  return {std::move(r), d};
}

Matrix unscale_estimate(const Matrix& theta_corr, const Vector& d) {
  return d.cwiseInverse().asDiagonal() * theta_corr * d.cwiseInverse().asDiagonal();
}

}  // namespace gglopt
