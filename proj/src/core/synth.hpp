#ifndef GGLOPT_CORE_SYNTH_HPP_
#define GGLOPT_CORE_SYNTH_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace gglopt {

// A known sparse Gaussian graphical model: precision matrix, its inverse, and
// the exact edge support (strictly-upper index pairs).
struct GroundTruth {
  Matrix precision;
  Matrix covariance;
  std::vector<std::pair<int, int>> edges;
  std::uint64_t seed = 0;
};

// Ground truth with hidden confounders already marginalized out: the observed
// precision is sparse minus low-rank, precision = sparse - lowrank with
// rank(lowrank) <= the number of confounders. edges is the support of the
// sparse component (the conditional structure a latent model should recover).
struct LatentGroundTruth {
  Matrix precision;
  Matrix sparse;
  Matrix lowrank;
  Matrix covariance;
  std::vector<std::pair<int, int>> edges;
  std::uint64_t seed = 0;
};

struct RecoveryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Erdos-Renyi precision matrix: each pair (i<j, row-major order) gets an edge
// with probability edge_probability; edge weights have magnitude uniform in
// [weight_lo, weight_hi] and random sign. The diagonal is set to the row
// absolute sum plus 0.1, which makes the matrix strictly diagonally dominant
// and therefore SPD while keeping the support exactly the drawn graph.
GroundTruth generate_precision(int p, double edge_probability, double weight_lo, double weight_hi,
                               std::uint64_t seed);

// Same construction on p + confounders variables, with observed-confounder
// pairs drawn at confounder_density and no confounder-confounder edges; the
// confounders are then marginalized analytically (Schur complement), giving
// sparse = observed block, lowrank = B C^-1 B^T.
LatentGroundTruth generate_latent_truth(int p, int confounders, double edge_probability,
                                        double confounder_density, double weight_lo,
                                        double weight_hi, std::uint64_t seed);

// Empirical covariance (1/N normalization) of N zero-mean Gaussian draws with
// the given covariance, generated through its Cholesky factor. Deterministic
// in (covariance, n_samples, seed).
Matrix sample_covariance(const Matrix& covariance, int n_samples, std::uint64_t seed);

// Edge recovery of theta against a known support: strictly-upper entries with
// |theta_ij| > tol count as predicted edges. precision is 1 when nothing is
// predicted, recall is 1 when true_edges is empty, f1 is 0 when both
// precision and recall are 0.
RecoveryMetrics recovery_metrics(const std::vector<std::pair<int, int>>& true_edges,
                                 const Matrix& theta, double tol = kEdgeZeroTol);

}  // namespace gglopt

#endif  // GGLOPT_CORE_SYNTH_HPP_
