#ifndef GGLOPT_CORE_SELECT_HPP_
#define GGLOPT_CORE_SELECT_HPP_

#include <stdexcept>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace gglopt {

// Candidate regularization values for a grid search. lambda1_values must be
// strictly descending; lambda2_values stays empty for SGL; a nonempty
// mu1_values switches the search to latent models (one shared mu1 per grid
// point, applied to every instance).
struct ParameterGrid {
  std::vector<double> lambda1_values;
  std::vector<double> lambda2_values;
  std::vector<double> mu1_values;
  double gamma = 0.5;
};

struct SelectionEntry {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu1 = 0.0;
  double ebic_score = 0.0;  // +inf when the solve did not converge
  std::vector<int> edge_counts;
  bool converged = false;
};

struct SelectionReport {
  std::vector<SelectionEntry> entries;
  int best = -1;       // index into entries
  Solution solution;   // best model, re-solved at tightened tolerance
};

// Thrown when no grid point converges; carries the full report.
class SelectionError : public std::runtime_error {
 public:
  explicit SelectionError(SelectionReport report)
      : std::runtime_error("no grid point converged"), report_(std::move(report)) {}
  const SelectionReport& report() const { return report_; }

 private:
  SelectionReport report_;
};

// Extended BIC (Foygel & Drton 2010), summed per instance:
//   sum_k N_k (tr(S_k Theta_k) - log det Theta_k) + E_k log N_k + 4 E_k gamma log p
// with E_k the strictly-upper-triangle entries of Theta_k above the zero
// tolerance. gamma = 0 recovers the classical BIC form.
double ebic(const CovarianceSet& cov, const MatrixList& theta, double gamma);

// Latent variant: the likelihood term uses the precision estimates (Theta - L)
// while edges are counted on the sparse components.
double ebic(const CovarianceSet& cov, const MatrixList& precision, const MatrixList& sparsity,
            double gamma);

int count_edges(const Matrix& theta, double tol = kEdgeZeroTol);

// Logarithmically spaced grid over two decades, from
// lambda_max = max_k max_{i!=j} |S^(k)_ij| (the smallest lambda1 with a fully
// diagonal SGL solution) down to lambda_max/100. Falls back to [1, .., 0.01]
// when every off-diagonal entry is zero.
std::vector<double> default_lambda_grid(const CovarianceSet& cov, int count);

// Solves at every grid point (lambda1 descending outermost, lambda2 then mu1
// inner, warm starting each solve from the previous one), scores converged
// solves with ebic, and re-solves the winner at eps_abs/10. Ties within 1e-9
// go to the sparser model: larger lambda1, then larger lambda2, then larger
// mu1. Throws SelectionError when nothing converges.
SelectionReport grid_search(const CovarianceSet& cov, PenaltyFamily family,
                            const ParameterGrid& grid, const SolverOptions& opts);

// R_ij = S_ij / sqrt(S_ii S_jj) plus the scale vector d_i = sqrt(S_ii).
// Throws InvalidInputError on a nonpositive diagonal.
std::pair<Matrix, Vector> scale_to_correlation(const Matrix& s);

// Maps a correlation-scale estimate back: Theta = D^-1 Theta_corr D^-1.
Matrix unscale_estimate(const Matrix& theta_corr, const Vector& d);

}  // namespace gglopt

#endif  // GGLOPT_CORE_SELECT_HPP_
