#include <cmath>
#include <limits>
#include <vector>

#include "core/admm.hpp"
#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/select.hpp"
#include "core/synth.hpp"
#include "doctest.h"
#include "testutil.hpp"

namespace {

using gglopt::CovarianceSet;
using gglopt::Matrix;
using gglopt::MatrixList;
using gglopt::ParameterGrid;
using gglopt::PenaltyFamily;
using gglopt::Rng;
using gglopt::SelectionReport;
using gglopt::SolverOptions;
using gglopt::Vector;

}  // namespace

TEST_CASE("count_edges respects the zero tolerance") {
  Matrix t = Matrix::Identity(3, 3);
  t(0, 1) = 0.5;
  t(1, 0) = 0.5;
  t(0, 2) = 1e-9;  // below tolerance
  t(2, 0) = 1e-9;
  CHECK(gglopt::count_edges(t) == 1);
  CHECK(gglopt::count_edges(t, 1e-10) == 2);
}

TEST_CASE("ebic on a diagonal model reduces to the likelihood term") {
  const CovarianceSet cov(Matrix::Identity(5, 5), 100);
  const MatrixList theta{Matrix::Identity(5, 5)};
  // N (tr(S Theta) - logdet Theta) = 100 (5 - 0); no edges, so gamma is moot
  CHECK(gglopt::ebic(cov, theta, 0.0) == doctest::Approx(500.0));
  CHECK(gglopt::ebic(cov, theta, 1.0) == doctest::Approx(500.0));
}

TEST_CASE("ebic matches a hand-evaluated one-edge instance") {
  const int p = 3;
  const int n = 50;
  Matrix s = Matrix::Identity(p, p);
  s(0, 1) = 0.2;
  s(1, 0) = 0.2;
  Matrix theta = Matrix::Identity(p, p);
  theta(0, 1) = 0.3;
  theta(1, 0) = 0.3;
  const CovarianceSet cov(s, n);

  // trace: 3 + 2 * 0.2 * 0.3; logdet of [[1,.3],[.3,1]] extended by 1: log(1 - 0.09)
  const double likelihood = n * ((3.0 + 0.12) - std::log(0.91));
  const double complexity = 1.0 * std::log(50.0) + 4.0 * 1.0 * 0.5 * std::log(3.0);
  CHECK(gglopt::ebic(cov, {theta}, 0.5) ==
        doctest::Approx(likelihood + complexity).epsilon(1e-12));
}

TEST_CASE("ebic at gamma zero is the classical BIC") {
  Rng rng(61);
  const Matrix s = testutil::random_spd(rng, 4);
  Matrix theta = gglopt::inverse_pd(s);
  const CovarianceSet cov(s, 80);
  const int edges = gglopt::count_edges(theta);
  const double bic =
      80.0 * ((s.cwiseProduct(theta)).sum() - gglopt::logdet_pd(theta)) + edges * std::log(80.0);
  CHECK(gglopt::ebic(cov, {theta}, 0.0) == doctest::Approx(bic).epsilon(1e-12));
}

TEST_CASE("ebic increases strictly with gamma when edges exist") {
  Rng rng(62);
  const Matrix s = testutil::random_spd(rng, 5);
  const MatrixList theta{gglopt::inverse_pd(s)};
  const CovarianceSet cov(s, 60);
  REQUIRE(gglopt::count_edges(theta[0]) > 0);
  double previous = -std::numeric_limits<double>::infinity();
  for (const double gamma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double score = gglopt::ebic(cov, theta, gamma);
    CHECK(score > previous);
    previous = score;
  }
}

TEST_CASE("ebic validates its arguments") {
  const CovarianceSet cov(Matrix::Identity(3, 3), 50);
  const MatrixList theta{Matrix::Identity(3, 3)};
  CHECK_THROWS_AS(gglopt::ebic(cov, theta, -0.1), gglopt::InvalidInputError);
  CHECK_THROWS_AS(gglopt::ebic(cov, theta, 1.1), gglopt::InvalidInputError);

  Matrix bad(3, 3);
  bad << 1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0;
  CHECK_THROWS_AS(gglopt::ebic(cov, {bad}, 0.5), gglopt::DomainError);
}

TEST_CASE("latent ebic scores likelihood on the difference, edges on the sparse part") {
  const int p = 4;
  const CovarianceSet cov(Matrix::Identity(p, p), 100);
  Matrix sparse = Matrix::Identity(p, p);
  sparse(0, 1) = 0.4;
  sparse(1, 0) = 0.4;
  const Matrix lowrank = 0.1 * Matrix::Identity(p, p);
  const Matrix precision = sparse - lowrank;

  const double likelihood = 100.0 * (precision.trace() - gglopt::logdet_pd(precision));
  const double complexity = std::log(100.0) + 4.0 * 0.5 * std::log(4.0);
  CHECK(gglopt::ebic(cov, {precision}, {sparse}, 0.5) ==
        doctest::Approx(likelihood + complexity).epsilon(1e-10));
}

TEST_CASE("default_lambda_grid spans two decades") {
  Matrix s = Matrix::Identity(3, 3);
  s(0, 1) = 0.8;
  s(1, 0) = 0.8;
  const auto grid = gglopt::default_lambda_grid(CovarianceSet(s, 50), 3);
  REQUIRE(grid.size() == 3);
  CHECK(grid[0] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(grid[1] == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(grid[2] == doctest::Approx(0.008).epsilon(1e-12));
}

TEST_CASE("default_lambda_grid falls back on diagonal input") {
  const auto grid = gglopt::default_lambda_grid(CovarianceSet(Matrix::Identity(4, 4), 50), 2);
  REQUIRE(grid.size() == 2);
  CHECK(grid[0] == doctest::Approx(1.0));
  CHECK(grid[1] == doctest::Approx(0.01));
}

TEST_CASE("default_lambda_grid endpoints match the recomputed extremes") {
  Rng rng(63);
  const Matrix s = testutil::random_spd(rng, 10);
  double lambda_max = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      if (i != j) lambda_max = std::max(lambda_max, std::abs(s(i, j)));
  const auto grid = gglopt::default_lambda_grid(CovarianceSet(s, 50), 8);
  REQUIRE(grid.size() == 8);
  CHECK(std::abs(grid.front() - lambda_max) <= 1e-12);
  CHECK(std::abs(grid.back() - lambda_max / 100.0) <= 1e-12);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] < grid[i - 1]);
  CHECK_THROWS_AS(gglopt::default_lambda_grid(CovarianceSet(s, 50), 1),
                  gglopt::InvalidInputError);
}

TEST_CASE("scale_to_correlation closed forms and round trip") {
  Rng rng(64);

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 4.0;
  diag(1, 1) = 9.0;
  const auto [r, d] = gglopt::scale_to_correlation(diag);
  CHECK(testutil::max_abs_diff(r, Matrix::Identity(2, 2)) == 0.0);
  CHECK(d[0] == doctest::Approx(2.0));
  CHECK(d[1] == doctest::Approx(3.0));

  const Matrix s = testutil::random_spd(rng, 6);
  const auto [corr, scales] = gglopt::scale_to_correlation(s);
  for (int i = 0; i < 6; ++i) CHECK(corr(i, i) == 1.0);
  // rebuild S from the correlation and scales
  const Matrix rebuilt = scales.asDiagonal() * corr * scales.asDiagonal();
  CHECK(testutil::max_abs_diff(rebuilt, s) <= 1e-12);

  // already a correlation matrix: unchanged
  const auto [corr2, ones] = gglopt::scale_to_correlation(corr);
  CHECK(testutil::max_abs_diff(corr2, corr) <= 1e-15);
  CHECK((ones - Vector::Ones(6)).cwiseAbs().maxCoeff() == 0.0);

  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = 0.0;
  CHECK_THROWS_AS(gglopt::scale_to_correlation(bad), gglopt::InvalidInputError);
}

TEST_CASE("unscale_estimate maps back through the inverse scales") {
  Rng rng(65);
  const Matrix theta = testutil::random_spd(rng, 3);
  Vector d(3);
  d << 2.0, 0.5, 4.0;
  const Matrix back = gglopt::unscale_estimate(theta, d);
  const Matrix expected =
      d.cwiseInverse().asDiagonal() * theta * d.cwiseInverse().asDiagonal();
  CHECK(testutil::max_abs_diff(back, expected) <= 1e-15);
}

TEST_CASE("grid validation catches malformed grids") {
  Rng rng(66);
  const CovarianceSet cov(testutil::random_spd(rng, 4), 50);
  const SolverOptions opts;

  ParameterGrid empty;
  CHECK_THROWS_AS(gglopt::grid_search(cov, PenaltyFamily::SGL, empty, opts),
                  gglopt::InvalidInputError);

  ParameterGrid ascending;
  ascending.lambda1_values = {0.1, 0.2};
  CHECK_THROWS_AS(gglopt::grid_search(cov, PenaltyFamily::SGL, ascending, opts),
                  gglopt::InvalidInputError);

  ParameterGrid sgl_with_l2;
  sgl_with_l2.lambda1_values = {0.2, 0.1};
  sgl_with_l2.lambda2_values = {0.05};
  CHECK_THROWS_AS(gglopt::grid_search(cov, PenaltyFamily::SGL, sgl_with_l2, opts),
                  gglopt::InvalidInputError);

  ParameterGrid bad_gamma;
  bad_gamma.lambda1_values = {0.2, 0.1};
  bad_gamma.gamma = 1.5;
  CHECK_THROWS_AS(gglopt::grid_search(cov, PenaltyFamily::SGL, bad_gamma, opts),
                  gglopt::InvalidInputError);
}

TEST_CASE("single-point grid selects that point") {
  Rng rng(67);
  const CovarianceSet cov(testutil::random_spd(rng, 5), 80);
  ParameterGrid grid;
  grid.lambda1_values = {0.15};
  const SelectionReport report =
      gglopt::grid_search(cov, PenaltyFamily::SGL, grid, SolverOptions{});
  REQUIRE(report.entries.size() == 1);
  CHECK(report.best == 0);
  CHECK(report.entries[0].converged);
  CHECK(report.entries[0].lambda1 == doctest::Approx(0.15));
  CHECK(report.solution.diagnostics.converged);
  CHECK(std::isfinite(report.entries[0].ebic_score));
  REQUIRE(report.entries[0].edge_counts.size() == 1);
}

TEST_CASE("grid_search is deterministic") {
  const auto truth = gglopt::generate_precision(8, 0.2, 0.3, 0.6, 71);
  const Matrix s = gglopt::sample_covariance(truth.covariance, 300, 72);
  const CovarianceSet cov(s, 300);
  ParameterGrid grid;
  grid.lambda1_values = gglopt::default_lambda_grid(cov, 5);

  const SelectionReport a = gglopt::grid_search(cov, PenaltyFamily::SGL, grid, SolverOptions{});
  const SelectionReport b = gglopt::grid_search(cov, PenaltyFamily::SGL, grid, SolverOptions{});
  REQUIRE(a.entries.size() == b.entries.size());
  CHECK(a.best == b.best);
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].ebic_score == b.entries[i].ebic_score);
    CHECK(a.entries[i].edge_counts == b.entries[i].edge_counts);
  }
  CHECK(testutil::max_abs_diff(a.solution.theta[0], b.solution.theta[0]) == 0.0);
}

TEST_CASE("warm-started grid entries match cold starts") {
  const auto truth = gglopt::generate_precision(8, 0.2, 0.3, 0.6, 73);
  const Matrix s = gglopt::sample_covariance(truth.covariance, 300, 74);
  const CovarianceSet cov(s, 300);
  const SolverOptions opts;
  ParameterGrid grid;
  grid.lambda1_values = gglopt::default_lambda_grid(cov, 4);

  const SelectionReport report = gglopt::grid_search(cov, PenaltyFamily::SGL, grid, opts);
  for (const auto& entry : report.entries) {
    REQUIRE(entry.converged);
    const gglopt::Solution cold = gglopt::solve_sgl(s, 300, entry.lambda1, opts);
    const double cold_score = gglopt::ebic(cov, cold.theta, grid.gamma);
    CHECK(std::abs(entry.ebic_score - cold_score) <=
          1e-5 * std::max(1.0, std::abs(cold_score)));
  }
}

TEST_CASE("best entry is converged whenever any entry converged") {
  const auto truth = gglopt::generate_precision(10, 0.3, 0.3, 0.6, 75);
  const Matrix s = gglopt::sample_covariance(truth.covariance, 400, 76);
  const CovarianceSet cov(s, 400);
  SolverOptions opts;
  opts.max_iter = 40;  // enough for heavily penalized points only
  ParameterGrid grid;
  grid.lambda1_values = gglopt::default_lambda_grid(cov, 6);

  const SelectionReport report = gglopt::grid_search(cov, PenaltyFamily::SGL, grid, opts);
  bool any_failed = false;
  for (const auto& entry : report.entries) any_failed = any_failed || !entry.converged;
  REQUIRE(report.best >= 0);
  CHECK(report.entries[report.best].converged);
  if (any_failed) {
    for (const auto& entry : report.entries)
      if (!entry.converged) CHECK(std::isinf(entry.ebic_score));
  }
}

TEST_CASE("stronger gamma never selects more edges") {
  const auto truth = gglopt::generate_precision(10, 0.2, 0.3, 0.6, 77);
  const Matrix s = gglopt::sample_covariance(truth.covariance, 500, 78);
  const CovarianceSet cov(s, 500);
  ParameterGrid grid;
  grid.lambda1_values = gglopt::default_lambda_grid(cov, 8);

  grid.gamma = 0.0;
  const SelectionReport loose = gglopt::grid_search(cov, PenaltyFamily::SGL, grid, SolverOptions{});
  grid.gamma = 1.0;
  const SelectionReport strict = gglopt::grid_search(cov, PenaltyFamily::SGL, grid, SolverOptions{});
  CHECK(strict.entries[strict.best].edge_counts[0] <= loose.entries[loose.best].edge_counts[0]);
}

TEST_CASE("selection fails loudly when nothing converges") {
  Rng rng(68);
  const CovarianceSet cov(testutil::random_spd(rng, 12), 100);
  SolverOptions opts;
  opts.max_iter = 1;
  opts.eps_abs = 1e-14;
  opts.eps_rel = 1e-14;
  ParameterGrid grid;
  grid.lambda1_values = {0.05, 0.01};

  try {
    gglopt::grid_search(cov, PenaltyFamily::SGL, grid, opts);
    FAIL("expected SelectionError");
  } catch (const gglopt::SelectionError& err) {
    CHECK(err.report().entries.size() == 2);
    for (const auto& entry : err.report().entries) {
      CHECK_FALSE(entry.converged);
      CHECK(std::isinf(entry.ebic_score));
    }
    CHECK(err.report().best == -1);
  }
}

TEST_CASE("multi-instance grids cover the lambda2 cross product") {
  const auto truth_a = gglopt::generate_precision(6, 0.25, 0.3, 0.6, 79);
  const auto truth_b = gglopt::generate_precision(6, 0.25, 0.3, 0.6, 80);
  const Matrix sa = gglopt::sample_covariance(truth_a.covariance, 200, 81);
  const Matrix sb = gglopt::sample_covariance(truth_b.covariance, 200, 82);
  const CovarianceSet cov(MatrixList{sa, sb}, {200, 200});

  ParameterGrid grid;
  grid.lambda1_values = {0.3, 0.1};
  grid.lambda2_values = {0.01, 0.05};
  const SelectionReport report =
      gglopt::grid_search(cov, PenaltyFamily::GGL, grid, SolverOptions{});
  CHECK(report.entries.size() == 4);
  REQUIRE(report.best >= 0);
  REQUIRE(report.entries[report.best].edge_counts.size() == 2);
  CHECK(report.solution.instances() == 2);
}

TEST_CASE("a nonempty mu1 grid switches the search to latent models") {
  const auto truth = gglopt::generate_latent_truth(12, 1, 0.15, 0.6, 0.3, 0.6, 83);
  const Matrix s = gglopt::sample_covariance(truth.covariance, 800, 84);
  const CovarianceSet cov(s, 800);

  ParameterGrid grid;
  grid.lambda1_values = {0.2, 0.1};
  grid.mu1_values = {0.05, 0.5};
  const SelectionReport report =
      gglopt::grid_search(cov, PenaltyFamily::SGL, grid, SolverOptions{});
  CHECK(report.entries.size() == 4);
  REQUIRE(report.best >= 0);
  CHECK(report.entries[report.best].mu1 > 0.0);
  REQUIRE(report.solution.lowrank.size() == 1);
  // the low-rank estimate is PSD
  Eigen::SelfAdjointEigenSolver<Matrix> es(report.solution.lowrank[0], Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}
