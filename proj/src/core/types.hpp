#ifndef GGLOPT_CORE_TYPES_HPP_
#define GGLOPT_CORE_TYPES_HPP_

#include <string>
#include <vector>

#include "core/linalg.hpp"

namespace gglopt {

// Tolerances shared by validation and output checks.
inline constexpr double kInputSymmetryTol = 1e-10;
inline constexpr double kOutputSymmetryTol = 1e-9;
inline constexpr double kPsdEigTol = -1e-8;
inline constexpr double kEdgeZeroTol = 1e-8;

// Problem data: K empirical covariance matrices S^(k) with sample counts N_k.
// All matrices must share one dimension p.
struct CovarianceSet {
  MatrixList matrices;
  std::vector<int> sample_counts;

  CovarianceSet() = default;
  CovarianceSet(MatrixList mats, std::vector<int> counts)
      : matrices(std::move(mats)), sample_counts(std::move(counts)) {}

  // Single-instance convenience.
  CovarianceSet(Matrix s, int n) : matrices{std::move(s)}, sample_counts{n} {}

  int instances() const { return static_cast<int>(matrices.size()); }
  int dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
};

enum class PenaltyFamily { SGL, GGL, FGL };

const char* family_name(PenaltyFamily family);

// Which regularizer applies and with what strength. lambda2 is ignored for
// SGL; mu1 holds one nuclear-norm weight per instance and is used only when
// latent is set.
struct Penalty {
  PenaltyFamily family = PenaltyFamily::SGL;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool latent = false;
  std::vector<double> mu1;

  static Penalty sgl(double lambda1) { return Penalty{PenaltyFamily::SGL, lambda1, 0.0, false, {}}; }
  static Penalty latent_sgl(double lambda1, double mu1) {
    return Penalty{PenaltyFamily::SGL, lambda1, 0.0, true, {mu1}};
  }
};

struct Diagnostics {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective_value = 0.0;
  bool converged = false;
  double wall_time_seconds = 0.0;
};

struct SolverOptions {
  double rho_init = 1.0;
  int max_iter = 1000;
  double eps_abs = 1e-7;
  double eps_rel = 1e-5;
  bool adaptive_rho = true;
  bool scale_to_correlation = false;
};

// Estimates Theta^(k) (sparse) and L^(k) (low rank, zero when the model has
// no latent variables), plus convergence diagnostics.
struct Solution {
  MatrixList theta;
  MatrixList lowrank;
  Diagnostics diagnostics;

  int instances() const { return static_cast<int>(theta.size()); }
  int dim() const { return theta.empty() ? 0 : static_cast<int>(theta[0].rows()); }
};

enum class ViolationKind {
  Empty,
  DimensionMismatch,
  Asymmetry,
  NotPositiveSemidefinite,
  NonpositiveDiagonal,
  BadSampleCount,
};

struct Violation {
  ViolationKind kind;
  int instance;  // offending k, or -1 when the problem applies to the set
  std::string message;
};

// Reports every violation found; an empty list means the input is usable.
std::vector<Violation> validate_input(const CovarianceSet& cov);

// Throws InvalidInputError with a combined message unless validate_input is clean.
void require_valid(const CovarianceSet& cov);

// Checks penalty parameters against the data (SGL needs K=1, weights
// nonnegative, mu1 sized K when latent). Throws InvalidInputError.
void require_compatible(const CovarianceSet& cov, const Penalty& pen);

// Value of the estimation objective
//   sum_k [ -log det(Theta_k - L_k) + <S_k, Theta_k - L_k> ]
//   + P(Theta) + sum_k mu1_k tr(L_k)
// with P given by pen.family over off-diagonal entries. The nuclear norm of a
// PSD matrix is its trace, which is what the mu1 term uses. An empty lowrank
// list is treated as all-zero. Throws DomainError when some Theta_k - L_k is
// not positive definite.
double objective(const CovarianceSet& cov, const Penalty& pen, const MatrixList& theta,
                 const MatrixList& lowrank = {});

// The regularizer P(Theta) alone (off-diagonal sums, both triangles).
double penalty_value(const Penalty& pen, const MatrixList& theta);

}  // namespace gglopt

#endif  // GGLOPT_CORE_TYPES_HPP_
