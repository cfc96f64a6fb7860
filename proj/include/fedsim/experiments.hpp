#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fedsim/algorithms.hpp"
#include "fedsim/metrics.hpp"
#include "fedsim/synthgen.hpp"

namespace fedsim {

// Named experiment recipes the harness can execute end to end.
enum class Recipe {
  kDriftVsH,            // heterogeneity metrics as functions of H
  kDissimilaritySweep,  // same, across label-noise levels
  kConvergenceCompare,  // federated runs against centralized baselines
  kScalingNM,           // drift / dissimilarity against sample sizes
  kBoundCheck,          // measured distances against the theoretical bound
};

Recipe recipe_from_name(const std::string& name);
std::string recipe_name(Recipe recipe);

// Where metric recipes evaluate: "optimum", "zero", or a path to a
// whitespace-separated vector file.
struct MetricParams {
  double eta = 0.005;
  std::vector<int> H_values = {1, 2, 4, 8, 16, 32, 64, 128};
  std::string eval_point = "optimum";
  double beta = 0.5;   // caller-chosen bias-bound constants
  double gamma = 1.0;
};

struct ExperimentSpec {
  Recipe recipe = Recipe::kDriftVsH;

  // Problem source: a file when problem_file is nonempty, otherwise the
  // generator (whose seed is replaced by the per-run seed).
  SynthConfig synth;
  std::string problem_file;

  MetricParams metrics;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::filesystem::path output_dir = ".";

  // convergence-compare: federated configurations to run, plus baseline
  // step sizes (0 picks 1/L per problem).
  std::vector<RunConfig> algorithm_configs;
  double gd_lr = 0.0;
  double baseline_lr = 0.0;

  // scaling-nM: the (n, M) grid and the local work defining the drift.
  std::vector<int> grid_samples = {25, 100, 400};
  std::vector<int> grid_clients = {25, 100, 400};
  int scaling_local_steps = 4;

  // dissimilarity-sweep: label-noise variances to sweep.
  std::vector<double> noise_levels = {0.0225, 0.09, 0.36};

  // bound-check: run shape. bound_eta = 0 derives min{1/L, 1/(mu H)} / 2
  // from the problem.
  double bound_alpha = 0.125;
  double bound_eta = 0.0;
  int bound_local_steps = 5;
  int bound_rounds = 50;
  double bound_sigma_sq = 1.0;

  void validate() const;
};

struct ExperimentResult {
  std::vector<std::filesystem::path> per_seed_files;
  std::filesystem::path aggregate_file;
  std::filesystem::path summary_file;
  // False only when the bound-check recipe finds a round where the measured
  // mean breaks the bound; other recipes always report true.
  bool checks_passed = true;
};

// Executes the recipe over all seeds, writing one CSV per seed, one
// aggregate CSV (means and standard deviations in seed-list order) and a
// JSON summary. Reruns with the same spec produce byte-identical files at
// any worker-thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Shared row layouts (also used by the CLI's run/metrics subcommands).
void write_run_csv(const std::filesystem::path& path, const RunRecord& record);
void write_metrics_csv(const std::filesystem::path& path,
                       const HeterogeneityReport& report);

}  // namespace fedsim
