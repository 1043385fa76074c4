#ifndef GGLOPT_CORE_BLOCK_HPP_
#define GGLOPT_CORE_BLOCK_HPP_

#include "core/types.hpp"

namespace gglopt {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Partition of the variables into connected components. Component ids follow
// the order of first occurrence, so labels[0] == 0 always.
struct ComponentPartition {
  std::vector<int> labels;
  int component_count = 0;
  std::vector<int> component_sizes;
};

// Screening graph: an edge wherever |S_ij| > lambda1 strictly, i != j. The
// strict inequality matches the soft threshold, which zeroes an entry whose
// magnitude equals the threshold exactly.
BoolMatrix threshold_graph(const Matrix& s, double lambda1);

// Breadth-first labeling, visiting vertices from the lowest unvisited index,
// neighbors in index order. Deterministic for a given adjacency.
ComponentPartition connected_components(const BoolMatrix& adjacency);

// Covariance-thresholding fast path for the single Graphical Lasso: the
// converged solution is block diagonal along the connected components of
// threshold_graph(S, lambda1), so each block can be solved independently.
// Singleton components take the closed form Theta_ii = 1/S_ii; larger ones run
// solve_sgl on the principal submatrix, possibly concurrently (see
// parallel_for). Cross-component entries of the result are exact zeros.
// Diagnostics sum block iterations, take worst-case residuals, and flag the
// whole solution non-converged when any block fails to converge.
Solution solve_sgl_blockwise(const Matrix& s, int n_samples, double lambda1,
                             const SolverOptions& opts);

}  // namespace gglopt

#endif  // GGLOPT_CORE_BLOCK_HPP_
