// Command-line front end for the gglopt shared library. Everything numeric
// happens behind the C API in gglopt.h; this layer only parses flags, moves
// matrices between files and buffers, and writes manifests.

#include <gglopt.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "textio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kEdgeTol = 1e-8;
constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

// Model selection found no usable grid point; maps to exit 3.
class NoModelError : public std::runtime_error {
 public:
  explicit NoModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Turns a failed C API call into the matching exception.
void check(gglopt_status status, const std::string& what) {
  if (status == GGLOPT_OK) return;
  const std::string msg = what + ": " + gglopt_last_error();
  switch (status) {
    case GGLOPT_ERR_INPUT: throw cli::UsageError(msg);
    case GGLOPT_ERR_NO_MODEL: throw NoModelError(msg);
    default: throw std::runtime_error(msg);
  }
}

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  ~Handle() { Free(ptr_); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;

  T* get() const { return ptr_; }
  T** out() {
    Free(ptr_);
    ptr_ = nullptr;
    return &ptr_;
  }

 private:
  T* ptr_ = nullptr;
};

using ProblemHandle = Handle<gglopt_problem, gglopt_problem_free>;
using SolutionHandle = Handle<gglopt_solution, gglopt_solution_free>;
using SelectionHandle = Handle<gglopt_selection, gglopt_selection_free>;
using DatasetHandle = Handle<gglopt_dataset, gglopt_dataset_free>;

struct SolverFlags {
  double rho_init = 1.0;
  int max_iter = 1000;
  double eps_abs = 1e-7;
  double eps_rel = 1e-5;
  bool no_adaptive_rho = false;
  bool scale_to_correlation = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--rho", f.rho_init, "Initial ADMM penalty parameter");
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap per solve");
  cmd->add_option("--eps-abs", f.eps_abs, "Absolute stopping tolerance");
  cmd->add_option("--eps-rel", f.eps_rel, "Relative stopping tolerance");
  cmd->add_flag("--no-adaptive-rho", f.no_adaptive_rho, "Disable residual balancing");
  cmd->add_flag("--scale-to-correlation", f.scale_to_correlation,
                "Solve on the correlation scale and map the estimate back");
}

json solver_flags_json(const SolverFlags& f) {
  return json{{"rho", f.rho_init},
              {"max_iter", f.max_iter},
              {"eps_abs", f.eps_abs},
              {"eps_rel", f.eps_rel},
              {"adaptive_rho", !f.no_adaptive_rho},
              {"scale_to_correlation", f.scale_to_correlation}};
}

struct LoadedInputs {
  std::vector<std::string> paths;
  std::vector<cli::MatrixBuffer> matrices;
  std::vector<int> samples;
  int dim = 0;
};

LoadedInputs load_inputs(const std::string& input_list, const std::string& samples_list) {
  LoadedInputs in;
  in.paths = cli::split_list(input_list, "--input");
  in.samples = cli::parse_int_list(samples_list, "--samples");
  if (in.samples.size() == 1 && in.paths.size() > 1) {
    in.samples.assign(in.paths.size(), in.samples[0]);
  }
  if (in.samples.size() != in.paths.size()) {
    throw cli::UsageError("--samples needs one entry per input file (or a single shared value)");
  }
  for (const std::string& path : in.paths) {
    in.matrices.push_back(cli::read_matrix_csv(path));
    if (in.matrices.front().dim != in.matrices.back().dim) {
      throw cli::UsageError(path + ": dimension " + std::to_string(in.matrices.back().dim) +
                            " does not match " + std::to_string(in.matrices.front().dim));
    }
  }
  in.dim = in.matrices.front().dim;
  return in;
}

gglopt_family parse_family(const std::string& name) {
  if (name == "sgl") return GGLOPT_FAMILY_SGL;
  if (name == "ggl") return GGLOPT_FAMILY_GGL;
  if (name == "fgl") return GGLOPT_FAMILY_FGL;
  throw cli::UsageError("--family must be sgl, ggl, or fgl (got '" + name + "')");
}

void apply_options(gglopt_problem* prob, const SolverFlags& f) {
  check(gglopt_problem_set_options(prob, f.rho_init, f.max_iter, f.eps_abs, f.eps_rel,
                                   f.no_adaptive_rho ? 0 : 1, f.scale_to_correlation ? 1 : 0),
        "setting solver options");
}

void load_problem(gglopt_problem* prob, const LoadedInputs& in) {
  for (std::size_t k = 0; k < in.matrices.size(); ++k) {
    check(gglopt_problem_set_covariance(prob, static_cast<int>(k), in.matrices[k].values.data(),
                                        in.samples[k]),
          "loading " + in.paths[k]);
  }
}

json input_digests(const std::vector<std::string>& paths) {
  json arr = json::array();
  for (const std::string& p : paths) arr.push_back({{"path", p}, {"sha256", cli::sha256_file(p)}});
  return arr;
}

cli::MatrixBuffer fetch_matrix(int dim, const std::function<gglopt_status(double*)>& getter,
                               const std::string& what) {
  cli::MatrixBuffer m;
  m.dim = dim;
  m.values.resize(static_cast<std::size_t>(dim) * dim);
  check(getter(m.values.data()), what);
  return m;
}

json diagnostics_json(const gglopt_solution* sol) {
  int iterations = 0, converged = 0;
  double primal = 0, dual = 0, objective = 0, wall = 0;
  gglopt_solution_diagnostics(sol, &iterations, &primal, &dual, &objective, &converged, &wall);
  return json{{"iterations", iterations},
              {"primal_residual", primal},
              {"dual_residual", dual},
              {"objective", objective},
              {"converged", converged != 0},
              {"wall_seconds", wall}};
}

// Writes theta/lowrank/edge files for every instance; returns the file names.
std::vector<std::string> write_solution_files(const std::string& out_dir,
                                              const gglopt_solution* sol, bool latent) {
  std::vector<std::string> files;
  const int dim = gglopt_solution_dim(sol);
  const int instances = gglopt_solution_instances(sol);
  for (int k = 0; k < instances; ++k) {
    const cli::MatrixBuffer theta = fetch_matrix(
        dim, [&](double* buf) { return gglopt_solution_theta(sol, k, buf); },
        "reading estimate " + std::to_string(k));
    const std::string theta_name = "theta_" + std::to_string(k) + ".csv";
    const std::string edges_name = "edges_" + std::to_string(k) + ".tsv";
    cli::write_matrix_csv((fs::path(out_dir) / theta_name).string(), theta);
    cli::write_edges_tsv((fs::path(out_dir) / edges_name).string(), theta, kEdgeTol);
    files.push_back(theta_name);
    files.push_back(edges_name);
    if (latent) {
      const cli::MatrixBuffer low = fetch_matrix(
          dim, [&](double* buf) { return gglopt_solution_lowrank(sol, k, buf); },
          "reading low-rank component " + std::to_string(k));
      const std::string low_name = "lowrank_" + std::to_string(k) + ".csv";
      cli::write_matrix_csv((fs::path(out_dir) / low_name).string(), low);
      files.push_back(low_name);
    }
  }
  return files;
}

void write_manifest(const std::string& out_dir, json manifest) {
  manifest["tool_version"] = gglopt_version();
  cli::write_file_atomic((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

// ---- solve ----

struct SolveArgs {
  std::string family = "sgl";
  std::string input;
  std::string samples;
  double lambda1 = 0.0;
  std::optional<double> lambda2;  // set after parsing when --lambda2 was given
  double lambda2_value = 0.0;
  bool latent = false;
  std::string mu1;
  bool blockwise = false;
  std::string out_dir = ".";
  SolverFlags flags;
};

int run_solve(const SolveArgs& args) {
  const gglopt_family family = parse_family(args.family);
  if (family == GGLOPT_FAMILY_SGL && args.lambda2.has_value()) {
    throw cli::UsageError("--lambda2 does not apply to --family sgl");
  }
  if (args.latent != !args.mu1.empty()) {
    throw cli::UsageError("--latent and --mu1 must be used together");
  }
  if (args.blockwise && (family != GGLOPT_FAMILY_SGL || args.latent)) {
    throw cli::UsageError("--blockwise requires --family sgl without --latent");
  }

  const LoadedInputs in = load_inputs(args.input, args.samples);
  ProblemHandle prob;
  *prob.out() = gglopt_problem_new(in.dim, static_cast<int>(in.matrices.size()));
  if (prob.get() == nullptr) throw cli::UsageError("matrices must be at least 2x2");
  load_problem(prob.get(), in);
  check(gglopt_problem_set_penalty(prob.get(), family, args.lambda1,
                                   args.lambda2.value_or(0.0)),
        "setting penalty");

  std::vector<double> mu1_values;
  if (args.latent) {
    mu1_values = cli::parse_double_list(args.mu1, "--mu1");
    if (mu1_values.size() == 1 && in.matrices.size() > 1) {
      mu1_values.assign(in.matrices.size(), mu1_values[0]);
    }
    check(gglopt_problem_set_latent(prob.get(), mu1_values.data(),
                                    static_cast<int>(mu1_values.size())),
          "setting latent weights");
  }
  apply_options(prob.get(), args.flags);

  fs::create_directories(args.out_dir);
  SolutionHandle sol;
  check(args.blockwise ? gglopt_solve_blockwise(prob.get(), sol.out())
                       : gglopt_solve(prob.get(), sol.out()),
        "solving");

  const std::vector<std::string> files = write_solution_files(args.out_dir, sol.get(), args.latent);

  json diagnostics = diagnostics_json(sol.get());
  double kkt = 0.0;
  if (gglopt_kkt_residual(prob.get(), sol.get(), &kkt) == GGLOPT_OK) {
    diagnostics["kkt_residual"] = kkt;
  } else {
    diagnostics["kkt_residual"] = nullptr;
  }

  json manifest{{"command", "solve"},
                {"parameters",
                 {{"family", args.family},
                  {"lambda1", args.lambda1},
                  {"lambda2", args.lambda2.has_value() ? json(*args.lambda2) : json(nullptr)},
                  {"latent", args.latent},
                  {"mu1", mu1_values},
                  {"blockwise", args.blockwise},
                  {"samples", in.samples},
                  {"solver", solver_flags_json(args.flags)}}},
                {"inputs", input_digests(in.paths)},
                {"outputs", files},
                {"diagnostics", diagnostics}};
  write_manifest(args.out_dir, std::move(manifest));

  const bool converged = diagnostics["converged"].get<bool>();
  if (!converged) {
    std::cerr << "solver did not converge within " << args.flags.max_iter
              << " iterations; outputs written anyway\n";
    return kExitNoConvergence;
  }
  std::cout << "converged in " << diagnostics["iterations"].get<int>() << " iterations\n";
  return kExitOk;
}

// ---- select ----

struct SelectArgs {
  std::string family = "sgl";
  std::string input;
  std::string samples;
  std::string lambda1_grid;
  std::string lambda2_grid;
  bool latent = false;
  std::string mu1_grid;
  int grid_size = 8;
  double gamma = 0.5;
  std::string out_dir = ".";
  SolverFlags flags;
};

int run_select(const SelectArgs& args) {
  const gglopt_family family = parse_family(args.family);
  if (family == GGLOPT_FAMILY_SGL && !args.lambda2_grid.empty()) {
    throw cli::UsageError("--lambda2-grid does not apply to --family sgl");
  }
  if (args.latent != !args.mu1_grid.empty()) {
    throw cli::UsageError("--latent and --mu1-grid must be used together");
  }

  const LoadedInputs in = load_inputs(args.input, args.samples);
  ProblemHandle prob;
  *prob.out() = gglopt_problem_new(in.dim, static_cast<int>(in.matrices.size()));
  if (prob.get() == nullptr) throw cli::UsageError("matrices must be at least 2x2");
  load_problem(prob.get(), in);
  check(gglopt_problem_set_penalty(prob.get(), family, 0.0, 0.0), "setting penalty family");
  apply_options(prob.get(), args.flags);

  std::vector<double> lambda1;
  if (!args.lambda1_grid.empty()) {
    lambda1 = cli::parse_double_list(args.lambda1_grid, "--lambda1-grid");
  } else {
    if (args.grid_size < 2) throw cli::UsageError("--grid-size must be at least 2");
    lambda1.resize(args.grid_size);
    check(gglopt_default_lambda_grid(prob.get(), args.grid_size, lambda1.data()),
          "building default lambda1 grid");
  }
  std::vector<double> lambda2;
  if (!args.lambda2_grid.empty()) {
    lambda2 = cli::parse_double_list(args.lambda2_grid, "--lambda2-grid");
  }
  std::vector<double> mu1;
  if (args.latent) {
    mu1 = cli::parse_double_list(args.mu1_grid, "--mu1-grid");
  }

  fs::create_directories(args.out_dir);
  SelectionHandle sel;
  check(gglopt_select(prob.get(), lambda1.data(), static_cast<int>(lambda1.size()),
                      lambda2.empty() ? nullptr : lambda2.data(), static_cast<int>(lambda2.size()),
                      mu1.empty() ? nullptr : mu1.data(), static_cast<int>(mu1.size()), args.gamma,
                      sel.out()),
        "model selection");

  const int n_entries = gglopt_selection_size(sel.get());
  const int best = gglopt_selection_best(sel.get());
  const int instances = static_cast<int>(in.matrices.size());

  json entries = json::array();
  for (int idx = 0; idx < n_entries; ++idx) {
    double l1 = 0, l2 = 0, m1 = 0, score = 0;
    int converged = 0;
    gglopt_selection_entry(sel.get(), idx, &l1, &l2, &m1, &score, &converged);
    json edge_counts = json::array();
    for (int k = 0; k < instances; ++k) {
      int edges = 0;
      gglopt_selection_edge_count(sel.get(), idx, k, &edges);
      edge_counts.push_back(edges);
    }
    entries.push_back({{"lambda1", l1},
                       {"lambda2", l2},
                       {"mu1", m1},
                       {"ebic", std::isfinite(score) ? json(score) : json(nullptr)},
                       {"converged", converged != 0},
                       {"edge_counts", edge_counts},
                       {"best", idx == best}});
  }

  double best_l1 = 0, best_l2 = 0, best_mu = 0, best_score = 0;
  gglopt_selection_entry(sel.get(), best, &best_l1, &best_l2, &best_mu, &best_score, nullptr);
  json chosen{{"index", best},
              {"lambda1", best_l1},
              {"lambda2", best_l2},
              {"mu1", best_mu},
              {"ebic", best_score}};

  json report{{"family", args.family}, {"gamma", args.gamma}, {"entries", entries},
              {"chosen", chosen}};
  cli::write_file_atomic((fs::path(args.out_dir) / "report.json").string(),
                         report.dump(2) + "\n");

  SolutionHandle sol;
  check(gglopt_selection_solution(sel.get(), sol.out()), "extracting best solution");
  std::vector<std::string> files = write_solution_files(args.out_dir, sol.get(), args.latent);
  files.insert(files.begin(), "report.json");

  json manifest{{"command", "select"},
                {"parameters",
                 {{"family", args.family},
                  {"gamma", args.gamma},
                  {"lambda1_grid", lambda1},
                  {"lambda2_grid", lambda2},
                  {"mu1_grid", mu1},
                  {"latent", args.latent},
                  {"samples", in.samples},
                  {"solver", solver_flags_json(args.flags)}}},
                {"inputs", input_digests(in.paths)},
                {"outputs", files},
                {"selection", {{"chosen", chosen}, {"grid_points", n_entries}}},
                {"diagnostics", diagnostics_json(sol.get())}};
  write_manifest(args.out_dir, std::move(manifest));

  std::cout << "selected lambda1=" << cli::format_double(best_l1);
  if (!lambda2.empty()) std::cout << " lambda2=" << cli::format_double(best_l2);
  if (args.latent) std::cout << " mu1=" << cli::format_double(best_mu);
  std::cout << " (ebic " << cli::format_double(best_score) << ")\n";
  return kExitOk;
}

// ---- generate ----

struct GenerateArgs {
  int p = 0;
  int n_samples = 0;
  double edge_prob = 0.1;
  double weight_lo = 0.3;
  double weight_hi = 0.6;
  std::uint64_t seed = 0;
  int confounders = 0;
  double confounder_density = 0.5;
  std::string out_dir = ".";
};

int run_generate(const GenerateArgs& args) {
  DatasetHandle data;
  if (args.confounders > 0) {
    check(gglopt_generate_latent(args.p, args.confounders, args.edge_prob,
                                 args.confounder_density, args.weight_lo, args.weight_hi,
                                 args.seed, data.out()),
          "generating latent ground truth");
  } else {
    check(gglopt_generate(args.p, args.edge_prob, args.weight_lo, args.weight_hi, args.seed,
                          data.out()),
          "generating ground truth");
  }

  const std::uint64_t sample_seed = args.seed + 1;
  const int dim = gglopt_dataset_dim(data.get());
  const cli::MatrixBuffer precision = fetch_matrix(
      dim, [&](double* buf) { return gglopt_dataset_precision(data.get(), buf); },
      "reading precision");
  const cli::MatrixBuffer covariance = fetch_matrix(
      dim, [&](double* buf) { return gglopt_dataset_covariance(data.get(), buf); },
      "reading covariance");
  const cli::MatrixBuffer empirical = fetch_matrix(
      dim,
      [&](double* buf) {
        return gglopt_sample_covariance(data.get(), args.n_samples, sample_seed, buf);
      },
      "sampling empirical covariance");

  fs::create_directories(args.out_dir);
  std::vector<std::string> files{"precision.csv", "covariance.csv", "empirical.csv", "edges.tsv"};
  cli::write_matrix_csv((fs::path(args.out_dir) / "precision.csv").string(), precision);
  cli::write_matrix_csv((fs::path(args.out_dir) / "covariance.csv").string(), covariance);
  cli::write_matrix_csv((fs::path(args.out_dir) / "empirical.csv").string(), empirical);

  const int edge_count = gglopt_dataset_edge_count(data.get());
  std::vector<int> ei(edge_count), ej(edge_count);
  std::vector<double> ew(edge_count);
  if (edge_count > 0) {
    check(gglopt_dataset_edges(data.get(), ei.data(), ej.data(), ew.data()), "reading edges");
  }
  std::string edges_text;
  for (int e = 0; e < edge_count; ++e) {
    edges_text += std::to_string(ei[e]) + "\t" + std::to_string(ej[e]) + "\t" +
                  cli::format_double(ew[e]) + "\n";
  }
  cli::write_file_atomic((fs::path(args.out_dir) / "edges.tsv").string(), edges_text);

  if (args.confounders > 0) {
    const cli::MatrixBuffer lowrank = fetch_matrix(
        dim, [&](double* buf) { return gglopt_dataset_lowrank(data.get(), buf); },
        "reading low-rank component");
    cli::write_matrix_csv((fs::path(args.out_dir) / "lowrank.csv").string(), lowrank);
    files.push_back("lowrank.csv");
  }

  json manifest{{"command", "generate"},
                {"parameters",
                 {{"p", args.p},
                  {"n_samples", args.n_samples},
                  {"edge_prob", args.edge_prob},
                  {"weight_lo", args.weight_lo},
                  {"weight_hi", args.weight_hi},
                  {"seed", args.seed},
                  {"sample_seed", sample_seed},
                  {"confounders", args.confounders},
                  {"confounder_density", args.confounder_density}}},
                {"rng_algorithm", gglopt_rng_algorithm()},
                {"inputs", json::array()},
                {"outputs", files},
                {"true_edges", edge_count}};
  write_manifest(args.out_dir, std::move(manifest));

  std::cout << "wrote ground truth with " << edge_count << " edges to " << args.out_dir << "\n";
  return kExitOk;
}

// ---- benchmark ----

struct BenchmarkArgs {
  std::string sizes;
  std::string lambda1_list;
  double edge_prob = 0.0;  // 0 = auto (average degree 2)
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

struct BenchRow {
  int p = 0;
  double lambda1 = 0.0;
  std::string tol_label;
  int components = 0;
  int largest = 0;
  double full_seconds = 0.0, block_seconds = 0.0;
  double full_kkt = 0.0, block_kkt = 0.0;
  int full_iterations = 0, block_iterations = 0;
  bool full_converged = false, block_converged = false;

  double speedup() const { return block_seconds > 0.0 ? full_seconds / block_seconds : 0.0; }
};

// Smallest lambda1 (keeping the most edges) whose screening graph still has
// no component larger than the target; works down from the top quarter of
// off-diagonal magnitudes by halving the kept-edge budget.
double fragmenting_lambda(const gglopt_problem* prob, const cli::MatrixBuffer& s, int target) {
  std::vector<double> mags;
  mags.reserve(static_cast<std::size_t>(s.dim) * (s.dim - 1) / 2);
  for (int i = 0; i < s.dim; ++i) {
    for (int j = i + 1; j < s.dim; ++j) mags.push_back(std::abs(s.at(i, j)));
  }
  std::sort(mags.begin(), mags.end(), std::greater<double>());

  double best_lambda = mags.front();
  int best_largest = s.dim;
  for (int keep = std::max(4, s.dim / 4); keep >= 1; keep /= 2) {
    if (keep >= static_cast<int>(mags.size())) continue;
    const double lambda = mags[keep];
    int components = 0, largest = 0;
    check(gglopt_component_stats(prob, lambda, &components, &largest), "screening sweep");
    if (largest < best_largest) {
      best_largest = largest;
      best_lambda = lambda;
    }
    if (largest <= target) return lambda;
  }
  return best_lambda;
}

int run_benchmark(const BenchmarkArgs& args) {
  const std::vector<int> sizes = cli::parse_int_list(args.sizes, "--sizes");
  for (int p : sizes) {
    if (p < 10) throw cli::UsageError("--sizes entries must be at least 10");
  }
  std::vector<double> explicit_lambdas;
  if (!args.lambda1_list.empty()) {
    explicit_lambdas = cli::parse_double_list(args.lambda1_list, "--lambda1-list");
    for (double l : explicit_lambdas) {
      if (l < 0.0) throw cli::UsageError("--lambda1-list entries must be nonnegative");
    }
  }

  struct TolLevel {
    const char* label;
    double eps_abs, eps_rel;
  };
  const TolLevel levels[] = {{"default", 1e-7, 1e-5}, {"tight", 1e-9, 1e-7}};

  std::vector<BenchRow> rows;
  for (std::size_t pi = 0; pi < sizes.size(); ++pi) {
    const int p = sizes[pi];
    const int n_samples = 2 * p;
    const double edge_prob = args.edge_prob > 0.0 ? args.edge_prob : 2.0 / p;
    const std::uint64_t data_seed = args.seed + 2 * pi;
    const std::uint64_t sample_seed = args.seed + 2 * pi + 1;

    DatasetHandle data;
    check(gglopt_generate(p, edge_prob, 0.3, 0.6, data_seed, data.out()), "generating instance");
    const cli::MatrixBuffer s = fetch_matrix(
        p,
        [&](double* buf) { return gglopt_sample_covariance(data.get(), n_samples, sample_seed, buf); },
        "sampling instance");

    ProblemHandle prob;
    *prob.out() = gglopt_problem_new(p, 1);
    if (prob.get() == nullptr) throw std::runtime_error("problem allocation failed");
    check(gglopt_problem_set_covariance(prob.get(), 0, s.values.data(), n_samples),
          "loading instance");

    std::vector<double> lambdas = explicit_lambdas;
    if (lambdas.empty()) {
      lambdas.push_back(fragmenting_lambda(prob.get(), s, std::max(p / 10, 8)));
    }

    for (double lambda1 : lambdas) {
      check(gglopt_problem_set_penalty(prob.get(), GGLOPT_FAMILY_SGL, lambda1, 0.0),
            "setting penalty");
      int components = 0, largest = 0;
      check(gglopt_component_stats(prob.get(), lambda1, &components, &largest),
            "component stats");

      for (const TolLevel& level : levels) {
        check(gglopt_problem_set_options(prob.get(), 1.0, 1000, level.eps_abs, level.eps_rel, 1, 0),
              "setting solver options");

        BenchRow row;
        row.p = p;
        row.lambda1 = lambda1;
        row.tol_label = level.label;
        row.components = components;
        row.largest = largest;

        SolutionHandle full;
        check(gglopt_solve(prob.get(), full.out()), "full solve");
        int conv = 0;
        gglopt_solution_diagnostics(full.get(), &row.full_iterations, nullptr, nullptr, nullptr,
                                    &conv, &row.full_seconds);
        row.full_converged = conv != 0;
        if (gglopt_kkt_residual(prob.get(), full.get(), &row.full_kkt) != GGLOPT_OK) {
          row.full_kkt = std::nan("");
        }

        SolutionHandle block;
        check(gglopt_solve_blockwise(prob.get(), block.out()), "blockwise solve");
        gglopt_solution_diagnostics(block.get(), &row.block_iterations, nullptr, nullptr, nullptr,
                                    &conv, &row.block_seconds);
        row.block_converged = conv != 0;
        if (gglopt_kkt_residual(prob.get(), block.get(), &row.block_kkt) != GGLOPT_OK) {
          row.block_kkt = std::nan("");
        }

        rows.push_back(std::move(row));
      }
    }
  }

  std::string table =
      "p,lambda1,tolerance,components,largest_component,full_seconds,blockwise_seconds,"
      "speedup,full_kkt,blockwise_kkt,full_iterations,blockwise_iterations,"
      "full_converged,blockwise_converged\n";
  for (const BenchRow& r : rows) {
    table += std::to_string(r.p) + "," + cli::format_double(r.lambda1) + "," + r.tol_label + "," +
             std::to_string(r.components) + "," + std::to_string(r.largest) + "," +
             cli::format_double(r.full_seconds) + "," + cli::format_double(r.block_seconds) + "," +
             cli::format_double(r.speedup()) + "," + cli::format_double(r.full_kkt) + "," +
             cli::format_double(r.block_kkt) + "," + std::to_string(r.full_iterations) + "," +
             std::to_string(r.block_iterations) + "," + (r.full_converged ? "1" : "0") + "," +
             (r.block_converged ? "1" : "0") + "\n";
  }

  fs::create_directories(args.out_dir);
  cli::write_file_atomic((fs::path(args.out_dir) / "benchmark.csv").string(), table);

  std::printf("%6s %10s %9s %6s %8s %10s %10s %8s\n", "p", "lambda1", "tol", "comps", "largest",
              "full_s", "block_s", "speedup");
  for (const BenchRow& r : rows) {
    std::printf("%6d %10.5f %9s %6d %8d %10.3f %10.3f %8.2f\n", r.p, r.lambda1,
                r.tol_label.c_str(), r.components, r.largest, r.full_seconds, r.block_seconds,
                r.speedup());
  }

  json manifest{{"command", "benchmark"},
                {"parameters",
                 {{"sizes", sizes},
                  {"lambda1_list", explicit_lambdas},
                  {"edge_prob", args.edge_prob},
                  {"seed", args.seed},
                  {"samples_rule", "2p"},
                  {"tolerance_levels", {{"default", {1e-7, 1e-5}}, {"tight", {1e-9, 1e-7}}}}}},
                {"rng_algorithm", gglopt_rng_algorithm()},
                {"inputs", json::array()},
                {"outputs", {"benchmark.csv"}}};
  write_manifest(args.out_dir, std::move(manifest));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse inverse covariance estimation (single, joint, and latent models)"};
  app.set_version_flag("--version", gglopt_version());
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one problem at fixed penalties");
  solve_cmd->add_option("--family", solve_args.family, "Penalty family: sgl, ggl, or fgl");
  solve_cmd->add_option("--input", solve_args.input, "Covariance CSV file(s), comma separated")
      ->required();
  solve_cmd->add_option("-N,--samples", solve_args.samples, "Sample count per input")->required();
  solve_cmd->add_option("--lambda1", solve_args.lambda1, "Elementwise penalty weight")->required();
  CLI::Option* lambda2_opt = solve_cmd->add_option("--lambda2", solve_args.lambda2_value,
                                                   "Group/fused penalty weight (ggl/fgl only)");
  solve_cmd->add_flag("--latent", solve_args.latent, "Estimate a latent low-rank component");
  solve_cmd->add_option("--mu1", solve_args.mu1,
                        "Nuclear-norm weight(s), one per instance or one shared");
  solve_cmd->add_flag("--blockwise", solve_args.blockwise,
                      "Screen and solve connected components independently (sgl only)");
  solve_cmd->add_option("--out", solve_args.out_dir, "Output directory");
  add_solver_flags(solve_cmd, solve_args.flags);

  SelectArgs select_args;
  CLI::App* select_cmd = app.add_subcommand("select", "Grid search scored by the extended BIC");
  select_cmd->add_option("--family", select_args.family, "Penalty family: sgl, ggl, or fgl");
  select_cmd->add_option("--input", select_args.input, "Covariance CSV file(s), comma separated")
      ->required();
  select_cmd->add_option("-N,--samples", select_args.samples, "Sample count per input")
      ->required();
  select_cmd->add_option("--lambda1-grid", select_args.lambda1_grid,
                         "Explicit lambda1 values, descending");
  select_cmd->add_option("--lambda2-grid", select_args.lambda2_grid,
                         "lambda2 values (ggl/fgl only)");
  select_cmd->add_flag("--latent", select_args.latent, "Search latent models");
  select_cmd->add_option("--mu1-grid", select_args.mu1_grid, "mu1 values for latent models");
  select_cmd->add_option("--grid-size", select_args.grid_size,
                         "Size of the default lambda1 grid");
  select_cmd->add_option("--gamma", select_args.gamma, "Extended BIC parameter in [0,1]");
  select_cmd->add_option("--out", select_args.out_dir, "Output directory");
  add_solver_flags(select_cmd, select_args.flags);

  GenerateArgs generate_args;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "Write a seeded synthetic problem instance");
  generate_cmd->add_option("-p,--dim", generate_args.p, "Number of variables")->required();
  generate_cmd->add_option("-N,--samples", generate_args.n_samples, "Gaussian sample count")
      ->required();
  generate_cmd->add_option("--edge-prob", generate_args.edge_prob, "Edge probability");
  generate_cmd->add_option("--weight-lo", generate_args.weight_lo, "Smallest edge magnitude");
  generate_cmd->add_option("--weight-hi", generate_args.weight_hi, "Largest edge magnitude");
  generate_cmd->add_option("--seed", generate_args.seed, "Generator seed")->required();
  generate_cmd->add_option("--latent-confounders", generate_args.confounders,
                           "Hidden variables to marginalize out");
  generate_cmd->add_option("--confounder-density", generate_args.confounder_density,
                           "Observed-confounder edge probability");
  generate_cmd->add_option("--out", generate_args.out_dir, "Output directory");

  BenchmarkArgs benchmark_args;
  CLI::App* benchmark_cmd =
      app.add_subcommand("benchmark", "Time the full solver against the blockwise path");
  benchmark_cmd->add_option("--sizes", benchmark_args.sizes, "Problem sizes, comma separated")
      ->required();
  benchmark_cmd->add_option("--lambda1-list", benchmark_args.lambda1_list,
                            "Explicit lambda1 values (default: auto-fragmenting)");
  benchmark_cmd->add_option("--edge-prob", benchmark_args.edge_prob,
                            "Edge probability (default: average degree 2)");
  benchmark_cmd->add_option("--seed", benchmark_args.seed, "Generator seed")->required();
  benchmark_cmd->add_option("--out", benchmark_args.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (lambda2_opt->count() > 0) solve_args.lambda2 = solve_args.lambda2_value;

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (select_cmd->parsed()) return run_select(select_args);
    if (generate_cmd->parsed()) return run_generate(generate_args);
    if (benchmark_cmd->parsed()) return run_benchmark(benchmark_args);
    std::cerr << "no subcommand given\n";
    return kExitUsage;
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
