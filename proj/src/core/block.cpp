#include "core/block.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

#include "core/admm.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/select.hpp"

namespace gglopt {

BoolMatrix threshold_graph(const Matrix& s, double lambda1) {
  const Eigen::Index p = s.rows();
  BoolMatrix adj = BoolMatrix::Constant(p, p, false);
  for (Eigen::Index j = 1; j < p; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (std::abs(s(i, j)) > lambda1) {
        adj(i, j) = true;
        adj(j, i) = true;
      }
    }
  }
  return adj;
}

ComponentPartition connected_components(const BoolMatrix& adjacency) {
  const int p = static_cast<int>(adjacency.rows());
  ComponentPartition part;
  part.labels.assign(p, -1);
  std::queue<int> frontier;
  for (int start = 0; start < p; ++start) {
    if (part.labels[start] >= 0) continue;
    const int id = part.component_count++;
    part.component_sizes.push_back(0);
    part.labels[start] = id;
    frontier.push(start);
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      ++part.component_sizes[id];
      for (int w = 0; w < p; ++w) {
        if (adjacency(v, w) && part.labels[w] < 0) {
          part.labels[w] = id;
          frontier.push(w);
        }
      }
    }
  }
  return part;
}

namespace {

// Blockwise solve on the working scale; input already validated.
Solution blockwise_core(const Matrix& s, int n_samples, double lambda1,
                        const SolverOptions& opts) {
  const Eigen::Index p = s.rows();
  const ComponentPartition part = connected_components(threshold_graph(s, lambda1));

  std::vector<std::vector<int>> members(part.component_count);
  for (int c = 0; c < part.component_count; ++c) members[c].reserve(part.component_sizes[c]);
  for (int i = 0; i < static_cast<int>(p); ++i) members[part.labels[i]].push_back(i);

  Solution out;
  out.theta.assign(1, Matrix::Zero(p, p));
  out.lowrank.assign(1, Matrix::Zero(p, p));
  out.diagnostics.converged = true;

  std::vector<const std::vector<int>*> blocks;  // components that need an ADMM run
  for (int c = 0; c < part.component_count; ++c) {
    if (part.component_sizes[c] == 1) {
      const int i = members[c][0];
      out.theta[0](i, i) = 1.0 / s(i, i);
    } else {
      blocks.push_back(&members[c]);
    }
  }

  std::vector<Solution> block_solutions(blocks.size());
  parallel_for(static_cast<int>(blocks.size()), [&](int b) {
    const std::vector<int>& idx = *blocks[b];
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    Matrix sub(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) sub(i, j) = s(idx[i], idx[j]);
    }
    block_solutions[b] = solve(CovarianceSet(std::move(sub), n_samples),
                               Penalty::sgl(lambda1), opts);
  });

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::vector<int>& idx = *blocks[b];
    const Solution& sol = block_solutions[b];
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index i = 0; i < m; ++i) out.theta[0](idx[i], idx[j]) = sol.theta[0](i, j);
    }
    out.diagnostics.iterations += sol.diagnostics.iterations;
    out.diagnostics.primal_residual =
        std::max(out.diagnostics.primal_residual, sol.diagnostics.primal_residual);
    out.diagnostics.dual_residual =
        std::max(out.diagnostics.dual_residual, sol.diagnostics.dual_residual);
    out.diagnostics.converged = out.diagnostics.converged && sol.diagnostics.converged;
  }
  return out;
}

}  // namespace

Solution solve_sgl_blockwise(const Matrix& s, int n_samples, double lambda1,
                             const SolverOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  const CovarianceSet cov(s, n_samples);
  const Penalty pen = Penalty::sgl(lambda1);
  require_valid(cov);
  require_compatible(cov, pen);
  require_valid_options(opts);

  SolverOptions inner = opts;
  inner.scale_to_correlation = false;

  Solution out;
  if (!opts.scale_to_correlation) {
    out = blockwise_core(s, n_samples, lambda1, inner);
  } else {
    auto [r, d] = scale_to_correlation(s);
    out = blockwise_core(r, n_samples, lambda1, inner);
    const auto dinv = d.cwiseInverse().asDiagonal();
    out.theta[0] = dinv * out.theta[0] * dinv;
    symmetrize(out.theta[0]);
  }

  try {
    out.diagnostics.objective_value = objective(cov, pen, out.theta);
  } catch (const DomainError&) {
    out.diagnostics.objective_value = std::numeric_limits<double>::infinity();
  }
  out.diagnostics.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace gglopt
