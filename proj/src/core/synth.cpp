#include "core/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace gglopt {

namespace {

void check_weights(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw InvalidInputError("weight range needs 0 < lo <= hi");
  }
}

void check_probability(const char* name, double value) {
  if (!(value >= 0.0) || !(value <= 1.0)) {
    throw InvalidInputError(std::string(name) + " must lie in [0, 1]");
  }
}

// One signed edge weight; consumes two uniforms (magnitude, then sign).
double draw_weight(Rng& rng, double lo, double hi) {
  const double magnitude = rng.uniform(lo, hi);
  return rng.uniform() < 0.5 ? magnitude : -magnitude;
}

std::vector<std::pair<int, int>> support_of(const Matrix& a) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i + 1; j < a.cols(); ++j) {
      if (std::abs(a(i, j)) > 1e-10) edges.emplace_back(i, j);
    }
  }
  return edges;
}

void dominate_diagonal(Matrix& a) {
  a.diagonal().setZero();
  const Vector row_sums = a.cwiseAbs().rowwise().sum();
  a.diagonal() = row_sums.array() + 0.1;
}

}  // namespace

GroundTruth generate_precision(int p, double edge_probability, double weight_lo, double weight_hi,
                               std::uint64_t seed) {
  if (p < 2) throw InvalidInputError("p must be at least 2");
  check_probability("edge_probability", edge_probability);
  check_weights(weight_lo, weight_hi);

  Rng rng(seed);
  Matrix theta = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (rng.uniform() < edge_probability) {
        const double w = draw_weight(rng, weight_lo, weight_hi);
        theta(i, j) = w;
        theta(j, i) = w;
      }
    }
  }
  dominate_diagonal(theta);

  GroundTruth truth;
  truth.covariance = inverse_pd(theta);
  truth.edges = support_of(theta);
  truth.precision = std::move(theta);
  truth.seed = seed;
  return truth;
}

LatentGroundTruth generate_latent_truth(int p, int confounders, double edge_probability,
                                        double confounder_density, double weight_lo,
                                        double weight_hi, std::uint64_t seed) {
  if (p < 2) throw InvalidInputError("p must be at least 2");
  if (confounders < 1) throw InvalidInputError("confounders must be at least 1");
  check_probability("edge_probability", edge_probability);
  check_probability("confounder_density", confounder_density);
  check_weights(weight_lo, weight_hi);

  const int dim = p + confounders;
  Rng rng(seed);
  Matrix full = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      if (i >= p) continue;  // confounders stay mutually independent
      const double prob = j < p ? edge_probability : confounder_density;
      if (rng.uniform() < prob) {
        const double w = draw_weight(rng, weight_lo, weight_hi);
        full(i, j) = w;
        full(j, i) = w;
      }
    }
  }
  dominate_diagonal(full);

  // Marginalize the confounder block: the observed precision is the Schur
  // complement A - B C^-1 B^T, a sparse matrix minus a PSD low-rank one.
  const Matrix a = full.topLeftCorner(p, p);
  const Matrix b = full.topRightCorner(p, confounders);
  const Matrix c = full.bottomRightCorner(confounders, confounders);

  LatentGroundTruth truth;
  truth.lowrank = b * inverse_pd(c) * b.transpose();
  symmetrize(truth.lowrank);
  truth.precision = a - truth.lowrank;
  symmetrize(truth.precision);
  truth.covariance = inverse_pd(truth.precision);
  truth.edges = support_of(a);
  truth.sparse = a;
  truth.seed = seed;
  return truth;
}

Matrix sample_covariance(const Matrix& covariance, int n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw InvalidInputError("n_samples must be at least 2");
  const Eigen::Index p = covariance.rows();
  if (p < 1 || covariance.cols() != p) throw InvalidInputError("covariance must be square");

  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw DomainError("covariance is not positive definite");
  }
  const Matrix factor = llt.matrixL();

  Rng rng(seed);
  Matrix z(p, n_samples);
  for (int s = 0; s < n_samples; ++s) {
    for (Eigen::Index i = 0; i < p; ++i) z(i, s) = rng.normal();
  }
  const Matrix x = factor * z;
  Matrix s = (x * x.transpose()) / static_cast<double>(n_samples);
  symmetrize(s);
  return s;
}

RecoveryMetrics recovery_metrics(const std::vector<std::pair<int, int>>& true_edges,
                                 const Matrix& theta, double tol) {
  std::set<std::pair<int, int>> truth;
  for (auto [i, j] : true_edges) truth.insert({std::min(i, j), std::max(i, j)});

  int predicted = 0, hits = 0;
  for (int i = 0; i < theta.rows(); ++i) {
    for (int j = i + 1; j < theta.cols(); ++j) {
      if (std::abs(theta(i, j)) > tol) {
        ++predicted;
        if (truth.count({i, j})) ++hits;
      }
    }
  }

  RecoveryMetrics m;
  m.precision = predicted == 0 ? 1.0 : static_cast<double>(hits) / predicted;
  m.recall = truth.empty() ? 1.0 : static_cast<double>(hits) / truth.size();
  m.f1 = m.precision + m.recall == 0.0 ? 0.0
                                       : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace gglopt
