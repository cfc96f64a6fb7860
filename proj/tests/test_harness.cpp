#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedsim/experiments.hpp"
#include "fedsim/parallel.hpp"
#include "fedsim/plot.hpp"
#include "fedsim/textio.hpp"

using fedsim::CsvTable;
using fedsim::ExperimentResult;
using fedsim::ExperimentSpec;
using fedsim::PlotFormat;
using fedsim::Recipe;
using fedsim::recipe_from_name;
using fedsim::recipe_name;
using fedsim::run_experiment;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fedsim-harness-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentSpec tiny_drift_spec(const fs::path& dir) {
  ExperimentSpec spec;
  spec.recipe = Recipe::kDriftVsH;
  spec.synth.dim = 4;
  spec.synth.num_clients = 6;
  spec.synth.samples_per_client = 15;
  spec.synth.attach_samples = false;
  spec.metrics.H_values = {1, 2, 4, 8};
  spec.metrics.eta = 0.01;
  spec.seeds = {1, 2, 3};
  spec.output_dir = dir;
  return spec;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("recipe names round-trip") {
  for (Recipe r : {Recipe::kDriftVsH, Recipe::kDissimilaritySweep,
                   Recipe::kConvergenceCompare, Recipe::kScalingNM,
                   Recipe::kBoundCheck}) {
    CHECK(recipe_from_name(recipe_name(r)) == r);
  }
  CHECK_THROWS_AS(recipe_from_name("unknown"), std::invalid_argument);
}

TEST_CASE("drift recipe writes per-seed, aggregate, and summary files") {
  const fs::path dir = fresh_dir("drift");
  const ExperimentResult res = run_experiment(tiny_drift_spec(dir));

  CHECK(res.checks_passed);
  REQUIRE(res.per_seed_files.size() == 3);
  for (const auto& f : res.per_seed_files) CHECK(fs::exists(f));
  REQUIRE(fs::exists(res.aggregate_file));
  REQUIRE(fs::exists(res.summary_file));

  const CsvTable seed0 = CsvTable::read(res.per_seed_files[0]);
  REQUIRE(seed0.rows.size() == 4);  // one row per H
  for (const std::string col :
       {"H", "squared_mean_bias", "mean_square_bias", "drift",
        "dissimilarity", "quadratic_bound"}) {
    CHECK(seed0.has_column(col));
  }
  CHECK(seed0.number(0, seed0.column("H")) == 1.0);
  CHECK(seed0.number(3, seed0.column("H")) == 8.0);

  // aggregate means are the arithmetic means of the per-seed values
  const CsvTable agg = CsvTable::read(res.aggregate_file);
  REQUIRE(agg.rows.size() == 4);
  const std::size_t mcol = agg.column("mean_square_bias_mean");
  for (std::size_t row = 0; row < 4; ++row) {
    double sum = 0.0;
    for (const auto& f : res.per_seed_files) {
      const CsvTable t = CsvTable::read(f);
      sum += t.number(row, t.column("mean_square_bias"));
    }
    CHECK(agg.number(row, mcol) ==
          doctest::Approx(sum / 3.0).epsilon(1e-12));
  }

  const std::string summary = slurp(res.summary_file);
  CHECK(summary.find("drift-vs-H") != std::string::npos);
  CHECK(summary.find("\"seeds\"") != std::string::npos);
}

TEST_CASE("experiment outputs are identical across reruns and thread counts") {
  const fs::path d1 = fresh_dir("det1");
  const fs::path d2 = fresh_dir("det2");
  fedsim::set_num_threads(1);
  const ExperimentResult a = run_experiment(tiny_drift_spec(d1));
  fedsim::set_num_threads(4);
  const ExperimentResult b = run_experiment(tiny_drift_spec(d2));
  fedsim::set_num_threads(1);

  REQUIRE(a.per_seed_files.size() == b.per_seed_files.size());
  for (std::size_t i = 0; i < a.per_seed_files.size(); ++i) {
    CHECK(slurp(a.per_seed_files[i]) == slurp(b.per_seed_files[i]));
  }
  CHECK(slurp(a.aggregate_file) == slurp(b.aggregate_file));
  CHECK(slurp(a.summary_file) == slurp(b.summary_file));
}

TEST_CASE("noise sweep separates the dissimilarity levels") {
  const fs::path dir = fresh_dir("sweep");
  ExperimentSpec spec = tiny_drift_spec(dir);
  spec.recipe = Recipe::kDissimilaritySweep;
  spec.noise_levels = {0.01, 0.36};
  const ExperimentResult res = run_experiment(spec);

  const CsvTable agg = CsvTable::read(res.aggregate_file);
  REQUIRE(agg.rows.size() == 2 * 4);  // levels x H values
  const std::size_t lcol = agg.column("eps_var");
  const std::size_t zcol = agg.column("dissimilarity_mean");
  double lo = -1.0, hi = -1.0;
  for (std::size_t r = 0; r < agg.rows.size(); ++r) {
    if (agg.number(r, lcol) == 0.01) lo = agg.number(r, zcol);
  }
  for (std::size_t r = 0; r < agg.rows.size(); ++r) {
    if (agg.number(r, lcol) == 0.36) hi = agg.number(r, zcol);
  }
  REQUIRE(lo > 0.0);
  REQUIRE(hi > 0.0);
  CHECK(hi > 5.0 * lo);  // variance scales the dissimilarity linearly (36x)
}

TEST_CASE("convergence recipe runs the baselines alongside") {
  const fs::path dir = fresh_dir("conv");
  ExperimentSpec spec = tiny_drift_spec(dir);
  spec.recipe = Recipe::kConvergenceCompare;
  spec.seeds = {1, 2};
  fedsim::RunConfig fed;
  fed.alpha = 0.5;
  fed.eta = 0.005;
  fed.local_steps = 4;
  fed.rounds = 6;
  spec.algorithm_configs = {fed};
  const ExperimentResult res = run_experiment(spec);

  const CsvTable agg = CsvTable::read(res.aggregate_file);
  const std::size_t acol = agg.column("algorithm");
  bool saw_fed = false, saw_gd = false, saw_batch = false;
  for (const auto& row : agg.rows) {
    saw_fed = saw_fed || row[acol] == "fedavg-local-gd";
    saw_gd = saw_gd || row[acol] == "gd";
    saw_batch = saw_batch || row[acol] == "minibatch-sgd";
  }
  CHECK(saw_fed);
  CHECK(saw_gd);
  CHECK(saw_batch);

  // every algorithm contributes rounds+1 rows
  CHECK(agg.rows.size() == 3u * 7u);
}

TEST_CASE("bound recipe passes on a well-behaved configuration") {
  const fs::path dir = fresh_dir("bound");
  ExperimentSpec spec = tiny_drift_spec(dir);
  spec.recipe = Recipe::kBoundCheck;
  spec.seeds = {1, 2, 3, 4};
  spec.bound_rounds = 12;
  spec.bound_sigma_sq = 0.5;
  spec.bound_local_steps = 3;
  const ExperimentResult res = run_experiment(spec);
  CHECK(res.checks_passed);

  const CsvTable agg = CsvTable::read(res.aggregate_file);
  CHECK(agg.has_column("dist_sq_mean"));
  CHECK(agg.has_column("bound"));
  REQUIRE(agg.rows.size() == 13);
  const std::size_t dcol = agg.column("dist_sq_mean");
  const std::size_t scol = agg.column("dist_sq_se");
  const std::size_t bcol = agg.column("bound");
  for (std::size_t r = 0; r < agg.rows.size(); ++r) {
    CHECK(agg.number(r, dcol) <=
          agg.number(r, bcol) + 3.0 * agg.number(r, scol));
  }
  const std::string summary = slurp(res.summary_file);
  CHECK(summary.find("mean_dist_sq_below_bound_every_round") !=
        std::string::npos);
  CHECK(summary.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("scaling recipe reports slopes in the summary") {
  const fs::path dir = fresh_dir("scaling");
  ExperimentSpec spec = tiny_drift_spec(dir);
  spec.recipe = Recipe::kScalingNM;
  spec.grid_samples = {15, 60};
  spec.grid_clients = {6, 24};
  spec.seeds = {1, 2, 3, 4, 5};
  spec.scaling_local_steps = 3;
  const ExperimentResult res = run_experiment(spec);

  const CsvTable agg = CsvTable::read(res.aggregate_file);
  REQUIRE(agg.rows.size() == 4);  // 2x2 grid
  CHECK(agg.has_column("drift_mean"));
  const std::string summary = slurp(res.summary_file);
  CHECK(summary.find("drift_slope") != std::string::npos);
  CHECK(summary.find("dissimilarity_slope") != std::string::npos);
}

TEST_CASE("svg and gnuplot renderings come out of recipe csvs") {
  const fs::path dir = fresh_dir("plots");
  const ExperimentResult res = run_experiment(tiny_drift_spec(dir));

  const fs::path svg = dir / "drift.svg";
  fedsim::emit_plotdata(res.aggregate_file, Recipe::kDriftVsH,
                        PlotFormat::kSvg, svg);
  const std::string svg_text = slurp(svg);
  CHECK(svg_text.find("<svg") != std::string::npos);
  CHECK(svg_text.find("polyline") != std::string::npos);
  CHECK(svg_text.find("mean_square_bias") != std::string::npos);

  const fs::path gp = dir / "drift.dat";
  fedsim::emit_plotdata(res.aggregate_file, Recipe::kDriftVsH,
                        PlotFormat::kGnuplot, gp);
  const std::string gp_text = slurp(gp);
  CHECK(gp_text.find("# plot data:") != std::string::npos);
  CHECK(gp_text.find("\"mean_square_bias\"") != std::string::npos);
}

TEST_CASE("plotting an empty csv fails without creating output") {
  const fs::path dir = fresh_dir("plot-empty");
  const fs::path csv = dir / "empty.csv";
  {
    std::ofstream out(csv);
    out << "H,mean_square_bias\n";
  }
  const fs::path out = dir / "nope.svg";
  CHECK_THROWS_AS(fedsim::emit_plotdata(csv, Recipe::kDriftVsH,
                                        PlotFormat::kSvg, out),
                  std::invalid_argument);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("plot format names parse") {
  CHECK(fedsim::plot_format_from_name("svg") == PlotFormat::kSvg);
  CHECK(fedsim::plot_format_from_name("gnuplot") == PlotFormat::kGnuplot);
  CHECK_THROWS_AS(fedsim::plot_format_from_name("png"), std::invalid_argument);
}

TEST_CASE("experiment spec validation catches bad shapes") {
  ExperimentSpec spec = tiny_drift_spec(fresh_dir("val"));
  spec.seeds.clear();
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = tiny_drift_spec(fresh_dir("val2"));
  spec.metrics.eta = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = tiny_drift_spec(fresh_dir("val3"));
  spec.recipe = Recipe::kScalingNM;
  spec.seeds = {1, 2};  // scaling needs >= 5
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

}  // TEST_SUITE
