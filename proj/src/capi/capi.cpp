#include "gglopt.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "core/admm.hpp"
#include "core/block.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/select.hpp"
#include "core/synth.hpp"
#include "core/types.hpp"
#include "core/version.hpp"

using gglopt::Matrix;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Runs f, translating exceptions into status codes and the thread-local
// error message.
template <typename F>
gglopt_status guarded(F&& f) {
  try {
    return f();
  } catch (const gglopt::SelectionError& e) {
    set_error(e.what());
    return GGLOPT_ERR_NO_MODEL;
  } catch (const gglopt::InvalidInputError& e) {
    set_error(e.what());
    return GGLOPT_ERR_INPUT;
  } catch (const gglopt::DomainError& e) {
    set_error(e.what());
    return GGLOPT_ERR_NUMERIC;
  } catch (const gglopt::NumericError& e) {
    set_error(e.what());
    return GGLOPT_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return GGLOPT_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return GGLOPT_ERR_INTERNAL;
  }
}

gglopt_status arg_error(const char* msg) {
  set_error(msg);
  return GGLOPT_ERR_ARG;
}

using RowMajorMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

struct gglopt_problem {
  gglopt::CovarianceSet cov;
  std::vector<bool> cov_set;
  gglopt::Penalty penalty;
  gglopt::SolverOptions options;
};

struct gglopt_solution {
  gglopt::Solution sol;
};

struct gglopt_selection {
  gglopt::SelectionReport report;
};

struct gglopt_dataset {
  Matrix precision;  // sparse component
  Matrix covariance;
  Matrix lowrank;
  std::vector<std::pair<int, int>> edges;
  bool latent = false;
};

extern "C" {

const char* gglopt_version(void) { return gglopt::kVersion; }

const char* gglopt_last_error(void) { return g_last_error.c_str(); }

const char* gglopt_rng_algorithm(void) { return gglopt::Rng::kAlgorithm; }

gglopt_problem* gglopt_problem_new(int dim, int instances) {
  if (dim < 2 || instances < 1) return nullptr;
  auto* prob = new (std::nothrow) gglopt_problem;
  if (prob == nullptr) return nullptr;
  prob->cov.matrices.assign(instances, Matrix::Zero(dim, dim));
  prob->cov.sample_counts.assign(instances, 0);
  prob->cov_set.assign(instances, false);
  return prob;
}

void gglopt_problem_free(gglopt_problem* prob) { delete prob; }

gglopt_status gglopt_problem_set_covariance(gglopt_problem* prob, int instance,
                                            const double* row_major, int n_samples) {
  if (prob == nullptr) return arg_error("null problem handle");
  if (instance < 0 || instance >= prob->cov.instances()) return arg_error("instance out of range");
  if (row_major == nullptr) return arg_error("null matrix buffer");
  return guarded([&] {
    if (n_samples < 2) throw gglopt::InvalidInputError("n_samples must be at least 2");
    const Eigen::Index p = prob->cov.dim();
    prob->cov.matrices[instance] = ConstRowMajorMap(row_major, p, p);
    prob->cov.sample_counts[instance] = n_samples;
    prob->cov_set[instance] = true;
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_problem_set_penalty(gglopt_problem* prob, gglopt_family family,
                                         double lambda1, double lambda2) {
  if (prob == nullptr) return arg_error("null problem handle");
  gglopt::PenaltyFamily fam;
  switch (family) {
    case GGLOPT_FAMILY_SGL: fam = gglopt::PenaltyFamily::SGL; break;
    case GGLOPT_FAMILY_GGL: fam = gglopt::PenaltyFamily::GGL; break;
    case GGLOPT_FAMILY_FGL: fam = gglopt::PenaltyFamily::FGL; break;
    default: return arg_error("unknown penalty family");
  }
  return guarded([&] {
    if (lambda1 < 0.0 || lambda2 < 0.0) {
      throw gglopt::InvalidInputError("penalty weights must be nonnegative");
    }
    prob->penalty.family = fam;
    prob->penalty.lambda1 = lambda1;
    prob->penalty.lambda2 = lambda2;
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_problem_set_latent(gglopt_problem* prob, const double* mu1, int count) {
  if (prob == nullptr) return arg_error("null problem handle");
  if (mu1 == nullptr) {
    prob->penalty.latent = false;
    prob->penalty.mu1.clear();
    return GGLOPT_OK;
  }
  return guarded([&] {
    if (count != prob->cov.instances()) {
      throw gglopt::InvalidInputError("latent penalty needs one mu1 entry per instance");
    }
    for (int k = 0; k < count; ++k) {
      if (mu1[k] < 0.0) throw gglopt::InvalidInputError("mu1 entries must be nonnegative");
    }
    prob->penalty.latent = true;
    prob->penalty.mu1.assign(mu1, mu1 + count);
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_problem_set_options(gglopt_problem* prob, double rho_init, int max_iter,
                                         double eps_abs, double eps_rel, int adaptive_rho,
                                         int scale_to_correlation) {
  if (prob == nullptr) return arg_error("null problem handle");
  return guarded([&] {
    gglopt::SolverOptions opts;
    opts.rho_init = rho_init;
    opts.max_iter = max_iter;
    opts.eps_abs = eps_abs;
    opts.eps_rel = eps_rel;
    opts.adaptive_rho = adaptive_rho != 0;
    opts.scale_to_correlation = scale_to_correlation != 0;
    gglopt::require_valid_options(opts);
    prob->options = opts;
    return GGLOPT_OK;
  });
}

namespace {

void require_covariances_set(const gglopt_problem& prob) {
  for (int k = 0; k < prob.cov.instances(); ++k) {
    if (!prob.cov_set[k]) {
      throw gglopt::InvalidInputError("covariance for instance " + std::to_string(k) +
                                      " was never set");
    }
  }
}

}  // namespace

gglopt_status gglopt_solve(const gglopt_problem* prob, gglopt_solution** out) {
  if (prob == nullptr) return arg_error("null problem handle");
  if (out == nullptr) return arg_error("null output pointer");
  return guarded([&] {
    require_covariances_set(*prob);
    gglopt::Solution sol = gglopt::solve(prob->cov, prob->penalty, prob->options);
    *out = new gglopt_solution{std::move(sol)};
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_solve_blockwise(const gglopt_problem* prob, gglopt_solution** out) {
  if (prob == nullptr) return arg_error("null problem handle");
  if (out == nullptr) return arg_error("null output pointer");
  return guarded([&] {
    require_covariances_set(*prob);
    if (prob->penalty.family != gglopt::PenaltyFamily::SGL || prob->penalty.latent) {
      throw gglopt::InvalidInputError(
          "the blockwise path requires the SGL family without the latent component");
    }
    gglopt::Solution sol =
        gglopt::solve_sgl_blockwise(prob->cov.matrices[0], prob->cov.sample_counts[0],
                                    prob->penalty.lambda1, prob->options);
    *out = new gglopt_solution{std::move(sol)};
    return GGLOPT_OK;
  });
}

void gglopt_solution_free(gglopt_solution* sol) { delete sol; }

int gglopt_solution_dim(const gglopt_solution* sol) { return sol == nullptr ? 0 : sol->sol.dim(); }

int gglopt_solution_instances(const gglopt_solution* sol) {
  return sol == nullptr ? 0 : sol->sol.instances();
}

namespace {

gglopt_status copy_matrix_out(const gglopt::MatrixList& list, int instance, double* out,
                              const char* what) {
  if (out == nullptr) return arg_error("null output buffer");
  if (instance < 0 || instance >= static_cast<int>(list.size())) {
    return arg_error(what);
  }
  const Matrix& m = list[instance];
  RowMajorMap(out, m.rows(), m.cols()) = m;
  return GGLOPT_OK;
}

}  // namespace

gglopt_status gglopt_solution_theta(const gglopt_solution* sol, int instance, double* out) {
  if (sol == nullptr) return arg_error("null solution handle");
  return copy_matrix_out(sol->sol.theta, instance, out, "instance out of range");
}

gglopt_status gglopt_solution_lowrank(const gglopt_solution* sol, int instance, double* out) {
  if (sol == nullptr) return arg_error("null solution handle");
  return copy_matrix_out(sol->sol.lowrank, instance, out, "instance out of range");
}

gglopt_status gglopt_solution_diagnostics(const gglopt_solution* sol, int* iterations,
                                          double* primal_residual, double* dual_residual,
                                          double* objective, int* converged,
                                          double* wall_seconds) {
  if (sol == nullptr) return arg_error("null solution handle");
  const gglopt::Diagnostics& d = sol->sol.diagnostics;
  if (iterations != nullptr) *iterations = d.iterations;
  if (primal_residual != nullptr) *primal_residual = d.primal_residual;
  if (dual_residual != nullptr) *dual_residual = d.dual_residual;
  if (objective != nullptr) *objective = d.objective_value;
  if (converged != nullptr) *converged = d.converged ? 1 : 0;
  if (wall_seconds != nullptr) *wall_seconds = d.wall_time_seconds;
  return GGLOPT_OK;
}

gglopt_status gglopt_kkt_residual(const gglopt_problem* prob, const gglopt_solution* sol,
                                  double* out) {
  if (prob == nullptr) return arg_error("null problem handle");
  if (sol == nullptr) return arg_error("null solution handle");
  if (out == nullptr) return arg_error("null output pointer");
  return guarded([&] {
    require_covariances_set(*prob);
    *out = gglopt::kkt_residual(prob->cov, prob->penalty, sol->sol);
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_component_stats(const gglopt_problem* prob, double lambda1,
                                     int* component_count, int* largest_component) {
  if (prob == nullptr) return arg_error("null problem handle");
  return guarded([&] {
    if (lambda1 < 0.0) throw gglopt::InvalidInputError("lambda1 must be nonnegative");
    if (!prob->cov_set[0]) throw gglopt::InvalidInputError("covariance for instance 0 was never set");
    const gglopt::ComponentPartition part =
        gglopt::connected_components(gglopt::threshold_graph(prob->cov.matrices[0], lambda1));
    if (component_count != nullptr) *component_count = part.component_count;
    if (largest_component != nullptr) {
      *largest_component =
          *std::max_element(part.component_sizes.begin(), part.component_sizes.end());
    }
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_default_lambda_grid(const gglopt_problem* prob, int count, double* out) {
  if (prob == nullptr) return arg_error("null problem handle");
  if (out == nullptr) return arg_error("null output buffer");
  return guarded([&] {
    require_covariances_set(*prob);
    const std::vector<double> grid = gglopt::default_lambda_grid(prob->cov, count);
    std::copy(grid.begin(), grid.end(), out);
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_select(const gglopt_problem* prob, const double* lambda1_values,
                            int n_lambda1, const double* lambda2_values, int n_lambda2,
                            const double* mu1_values, int n_mu1, double gamma,
                            gglopt_selection** out) {
  if (prob == nullptr) return arg_error("null problem handle");
  if (out == nullptr) return arg_error("null output pointer");
  if (lambda1_values == nullptr && n_lambda1 > 0) return arg_error("null lambda1 buffer");
  if (lambda2_values == nullptr && n_lambda2 > 0) return arg_error("null lambda2 buffer");
  if (mu1_values == nullptr && n_mu1 > 0) return arg_error("null mu1 buffer");
  return guarded([&] {
    require_covariances_set(*prob);
    gglopt::ParameterGrid grid;
    grid.lambda1_values.assign(lambda1_values, lambda1_values + std::max(n_lambda1, 0));
    grid.lambda2_values.assign(lambda2_values, lambda2_values + std::max(n_lambda2, 0));
    grid.mu1_values.assign(mu1_values, mu1_values + std::max(n_mu1, 0));
    grid.gamma = gamma;
    gglopt::SelectionReport report =
        gglopt::grid_search(prob->cov, prob->penalty.family, grid, prob->options);
    *out = new gglopt_selection{std::move(report)};
    return GGLOPT_OK;
  });
}

void gglopt_selection_free(gglopt_selection* sel) { delete sel; }

int gglopt_selection_size(const gglopt_selection* sel) {
  return sel == nullptr ? 0 : static_cast<int>(sel->report.entries.size());
}

int gglopt_selection_best(const gglopt_selection* sel) {
  return sel == nullptr ? -1 : sel->report.best;
}

gglopt_status gglopt_selection_entry(const gglopt_selection* sel, int index, double* lambda1,
                                     double* lambda2, double* mu1, double* ebic, int* converged) {
  if (sel == nullptr) return arg_error("null selection handle");
  if (index < 0 || index >= static_cast<int>(sel->report.entries.size())) {
    return arg_error("entry index out of range");
  }
  const gglopt::SelectionEntry& e = sel->report.entries[index];
  if (lambda1 != nullptr) *lambda1 = e.lambda1;
  if (lambda2 != nullptr) *lambda2 = e.lambda2;
  if (mu1 != nullptr) *mu1 = e.mu1;
  if (ebic != nullptr) *ebic = e.ebic_score;
  if (converged != nullptr) *converged = e.converged ? 1 : 0;
  return GGLOPT_OK;
}

gglopt_status gglopt_selection_edge_count(const gglopt_selection* sel, int index, int instance,
                                          int* out) {
  if (sel == nullptr) return arg_error("null selection handle");
  if (out == nullptr) return arg_error("null output pointer");
  if (index < 0 || index >= static_cast<int>(sel->report.entries.size())) {
    return arg_error("entry index out of range");
  }
  const gglopt::SelectionEntry& e = sel->report.entries[index];
  if (instance < 0 || instance >= static_cast<int>(e.edge_counts.size())) {
    return arg_error("instance out of range");
  }
  *out = e.edge_counts[instance];
  return GGLOPT_OK;
}

gglopt_status gglopt_selection_solution(const gglopt_selection* sel, gglopt_solution** out) {
  if (sel == nullptr) return arg_error("null selection handle");
  if (out == nullptr) return arg_error("null output pointer");
  if (sel->report.best < 0) return arg_error("selection has no best entry");
  return guarded([&] {
    *out = new gglopt_solution{sel->report.solution};
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_generate(int dim, double edge_probability, double weight_lo,
                              double weight_hi, uint64_t seed, gglopt_dataset** out) {
  if (out == nullptr) return arg_error("null output pointer");
  return guarded([&] {
    gglopt::GroundTruth truth =
        gglopt::generate_precision(dim, edge_probability, weight_lo, weight_hi, seed);
    auto* data = new gglopt_dataset;
    data->lowrank = Matrix::Zero(dim, dim);
    data->precision = std::move(truth.precision);
    data->covariance = std::move(truth.covariance);
    data->edges = std::move(truth.edges);
    data->latent = false;
    *out = data;
    return GGLOPT_OK;
  });
}

gglopt_status gglopt_generate_latent(int dim, int confounders, double edge_probability,
                                     double confounder_density, double weight_lo,
                                     double weight_hi, uint64_t seed, gglopt_dataset** out) {
  if (out == nullptr) return arg_error("null output pointer");
  return guarded([&] {
    gglopt::LatentGroundTruth truth = gglopt::generate_latent_truth(
        dim, confounders, edge_probability, confounder_density, weight_lo, weight_hi, seed);
    auto* data = new gglopt_dataset;
    data->precision = std::move(truth.sparse);
    data->covariance = std::move(truth.covariance);
    data->lowrank = std::move(truth.lowrank);
    data->edges = std::move(truth.edges);
    data->latent = true;
    *out = data;
    return GGLOPT_OK;
  });
}

void gglopt_dataset_free(gglopt_dataset* data) { delete data; }

int gglopt_dataset_dim(const gglopt_dataset* data) {
  return data == nullptr ? 0 : static_cast<int>(data->precision.rows());
}

int gglopt_dataset_has_latent(const gglopt_dataset* data) {
  return data != nullptr && data->latent ? 1 : 0;
}

int gglopt_dataset_edge_count(const gglopt_dataset* data) {
  return data == nullptr ? 0 : static_cast<int>(data->edges.size());
}

gglopt_status gglopt_dataset_precision(const gglopt_dataset* data, double* out) {
  if (data == nullptr) return arg_error("null dataset handle");
  if (out == nullptr) return arg_error("null output buffer");
  RowMajorMap(out, data->precision.rows(), data->precision.cols()) = data->precision;
  return GGLOPT_OK;
}

gglopt_status gglopt_dataset_covariance(const gglopt_dataset* data, double* out) {
  if (data == nullptr) return arg_error("null dataset handle");
  if (out == nullptr) return arg_error("null output buffer");
  RowMajorMap(out, data->covariance.rows(), data->covariance.cols()) = data->covariance;
  return GGLOPT_OK;
}

gglopt_status gglopt_dataset_lowrank(const gglopt_dataset* data, double* out) {
  if (data == nullptr) return arg_error("null dataset handle");
  if (out == nullptr) return arg_error("null output buffer");
  RowMajorMap(out, data->lowrank.rows(), data->lowrank.cols()) = data->lowrank;
  return GGLOPT_OK;
}

gglopt_status gglopt_dataset_edges(const gglopt_dataset* data, int* i_out, int* j_out,
                                   double* weight_out) {
  if (data == nullptr) return arg_error("null dataset handle");
  if (i_out == nullptr || j_out == nullptr || weight_out == nullptr) {
    return arg_error("null output buffer");
  }
  for (std::size_t e = 0; e < data->edges.size(); ++e) {
    const auto [i, j] = data->edges[e];
    i_out[e] = i;
    j_out[e] = j;
    weight_out[e] = data->precision(i, j);
  }
  return GGLOPT_OK;
}

gglopt_status gglopt_sample_covariance(const gglopt_dataset* data, int n_samples, uint64_t seed,
                                       double* out) {
  if (data == nullptr) return arg_error("null dataset handle");
  if (out == nullptr) return arg_error("null output buffer");
  return guarded([&] {
    const Matrix s = gglopt::sample_covariance(data->covariance, n_samples, seed);
    RowMajorMap(out, s.rows(), s.cols()) = s;
    return GGLOPT_OK;
  });
}

}  // extern "C"
