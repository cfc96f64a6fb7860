// fedsim — federated-averaging simulator and bound-verification toolkit.
//
// Subcommands: generate, run, metrics, bounds, sweep, plot. Every flag can
// also live in an INI-style config file (--config); command-line values win.
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 a bound check
// found a violated round.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fedsim/algorithms.hpp"
#include "fedsim/errors.hpp"
#include "fedsim/experiments.hpp"
#include "fedsim/metrics.hpp"
#include "fedsim/parallel.hpp"
#include "fedsim/plot.hpp"
#include "fedsim/problem_io.hpp"
#include "fedsim/synthgen.hpp"
#include "fedsim/textio.hpp"
#include "fedsim/theory.hpp"

namespace fs = std::filesystem;
using namespace fedsim;

namespace {

fs::path resolve(const fs::path& path, const fs::path& base) {
  return path.is_absolute() ? path : base / path;
}

UpdateMode mode_from_name(const std::string& name) {
  if (name == "local-gd") return UpdateMode::kDeterministic;
  if (name == "local-sgd") return UpdateMode::kStochastic;
  throw std::invalid_argument("unknown mode: " + name +
                              " (expected local-gd or local-sgd)");
}

NoiseModel noise_from_flags(double sigma, int batch) {
  if (batch > 0) return NoiseModel::minibatch(batch);
  return NoiseModel::additive_gaussian(sigma * sigma);
}

struct GenerateOptions {
  SynthConfig config;
  bool skip_samples = false;
  std::string output = "problem.txt";
};

// Sidecar record describing how a problem file was produced; keys mirror
// the generate flags so the draw can be repeated.
void write_generate_meta(const fs::path& path, const SynthConfig& config) {
  nlohmann::ordered_json meta;
  meta["dim"] = config.dim;
  meta["clients"] = config.num_clients;
  meta["samples"] = config.samples_per_client;
  meta["nu-max"] = config.nu_max;
  meta["eps-var"] = config.eps_var;
  meta["seed"] = config.seed;
  meta["skip-samples"] = !config.attach_samples;
  std::ofstream out(path);
  out << meta.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

int cmd_generate(const GenerateOptions& opt, const fs::path& out_dir) {
  SynthConfig config = opt.config;
  config.attach_samples = !opt.skip_samples;
  const FederatedProblem problem = generate(config);
  const fs::path path = resolve(opt.output, out_dir);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_problem(problem, path);
  write_generate_meta(path.string() + ".meta.json", config);
  std::cout << "wrote " << path.string() << ": dim=" << problem.dim()
            << " clients=" << problem.num_clients()
            << " mu=" << format_double(problem.strong_convexity())
            << " L=" << format_double(problem.smoothness())
            << " kappa=" << format_double(problem.condition_number()) << "\n";
  return 0;
}

struct RunOptions {
  std::string problem;
  RunConfig config;
  std::string mode = "local-gd";
  double sigma = 0.0;
  int batch = 0;
  std::string output = "run.csv";
};

int cmd_run(const RunOptions& opt, const fs::path& out_dir) {
  const FederatedProblem problem = load_problem(opt.problem);
  RunConfig config = opt.config;
  config.mode = mode_from_name(opt.mode);
  if (config.mode == UpdateMode::kStochastic)
    config.noise = noise_from_flags(opt.sigma, opt.batch);
  const Vector w0 = Vector::Zero(problem.dim());
  const RunRecord record = fedavg_run(problem, config, w0);
  const fs::path path = resolve(opt.output, out_dir);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_run_csv(path, record);
  std::cout << "wrote " << path.string() << ": rounds=" << record.rounds()
            << " final_dist_sq=" << format_double(record.dist_sq.back())
            << "\n";
  return 0;
}

struct MetricsOptions {
  std::string problem;
  MetricParams params;
  std::string output = "metrics.csv";
};

int cmd_metrics(const MetricsOptions& opt, const fs::path& out_dir) {
  const FederatedProblem problem = load_problem(opt.problem);
  Vector w;
  if (opt.params.eval_point == "optimum")
    w = problem.optimum();
  else if (opt.params.eval_point == "zero")
    w = Vector::Zero(problem.dim());
  else {
    std::ifstream in(opt.params.eval_point);
    if (!in)
      throw std::invalid_argument("cannot open eval-point file: " +
                                  opt.params.eval_point);
    std::vector<double> vals;
    double x;
    while (in >> x) vals.push_back(x);
    if (vals.size() != static_cast<std::size_t>(problem.dim()))
      throw std::invalid_argument("eval-point file size mismatch");
    w = Vector(problem.dim());
    for (int j = 0; j < problem.dim(); ++j) w[j] = vals[j];
  }
  const HeterogeneityReport report =
      bias_curves(problem, w, opt.params.eta, opt.params.H_values,
                  opt.params.beta, opt.params.gamma);
  const fs::path path = resolve(opt.output, out_dir);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_metrics_csv(path, report);
  std::cout << "wrote " << path.string()
            << ": dissimilarity=" << format_double(report.grad_dissimilarity)
            << "\n";
  return 0;
}

struct BoundsOptions {
  std::string run_csv;
  std::string problem;
  double alpha = 0.125;
  double eta = 0.0;  // 0 derives min{1/L, 1/(mu H)} / 2
  int local_steps = 1;
  double sigma = 0.0;
  std::string output = "bounds.csv";
};

int cmd_bounds(const BoundsOptions& opt, const fs::path& out_dir) {
  const FederatedProblem problem = load_problem(opt.problem);
  const CsvTable run = CsvTable::read(opt.run_csv);
  if (run.rows.empty())
    throw std::invalid_argument("run csv has no rows: " + opt.run_csv);
  const auto dist_col = run.column("dist_sq");

  const double mu = problem.strong_convexity();
  const double L = problem.smoothness();
  const int H = opt.local_steps;
  const double eta = opt.eta > 0.0
                         ? opt.eta
                         : 0.5 * std::min(1.0 / L, 1.0 / (mu * H));
  const int rounds = static_cast<int>(run.rows.size()) - 1;
  const double dist0 = run.number(0, dist_col);
  const double sigma_sq = opt.sigma * opt.sigma;

  const double rho = drift_at_optimum(problem, eta, H);
  const BoundTrace trace = stochastic_distance_bound(
      opt.alpha, eta, H, mu, L, rounds, dist0,
      pseudo_gradient_variance_bound(sigma_sq, problem.num_clients(), H),
      iterate_bias_sq_bound(eta, L, sigma_sq, H), rho);

  const fs::path path = resolve(opt.output, out_dir);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  int violations = 0;
  {
    CsvWriter csv(path);
    csv.header({"round", "dist_sq", "bound", "pass"});
    for (int t = 0; t <= rounds; ++t) {
      const double measured = run.number(t, dist_col);
      const bool pass = measured <= trace.bound[t];
      if (!pass) ++violations;
      csv.row({static_cast<std::int64_t>(t), measured, trace.bound[t],
               static_cast<std::int64_t>(pass ? 1 : 0)});
    }
  }
  std::cout << "wrote " << path.string() << ": "
            << (violations == 0 ? "PASS" : "FAIL") << " ("
            << (rounds + 1 - violations) << "/" << (rounds + 1)
            << " rounds within bound, drift=" << format_double(rho) << ")\n";
  return violations == 0 ? 0 : 3;
}

struct SweepOptions {
  std::string recipe;
  ExperimentSpec spec;
  std::vector<std::string> run_modes;  // one RunConfig per entry
  double run_alpha = 1.0;
  double run_eta = 0.01;
  int run_steps = 5;
  int run_rounds = 50;
  double run_sigma = 0.0;
  int run_batch = 0;
};

int cmd_sweep(SweepOptions& opt, const fs::path& out_dir) {
  opt.spec.recipe = recipe_from_name(opt.recipe);
  opt.spec.output_dir = out_dir;
  for (const auto& mode : opt.run_modes) {
    RunConfig cfg;
    cfg.alpha = opt.run_alpha;
    cfg.eta = opt.run_eta;
    cfg.local_steps = opt.run_steps;
    cfg.rounds = opt.run_rounds;
    cfg.mode = mode_from_name(mode);
    if (cfg.mode == UpdateMode::kStochastic)
      cfg.noise = noise_from_flags(opt.run_sigma, opt.run_batch);
    opt.spec.algorithm_configs.push_back(cfg);
  }
  const ExperimentResult result = run_experiment(opt.spec);
  for (const auto& f : result.per_seed_files)
    std::cout << "wrote " << f.string() << "\n";
  std::cout << "wrote " << result.aggregate_file.string() << "\n";
  std::cout << "wrote " << result.summary_file.string() << "\n";
  if (!result.checks_passed) {
    std::cout << "bound check FAILED: see summary\n";
    return 3;
  }
  return 0;
}

struct PlotOptions {
  std::string input;
  std::string kind;
  std::string format = "svg";
  std::string output;
};

int cmd_plot(const PlotOptions& opt, const fs::path& out_dir) {
  const PlotFormat format = plot_format_from_name(opt.format);
  fs::path out = opt.output;
  if (out.empty()) {
    out = fs::path(opt.input).filename();
    out.replace_extension(format == PlotFormat::kSvg ? ".svg" : ".dat");
  }
  const fs::path path = resolve(out, out_dir);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  emit_plotdata(opt.input, recipe_from_name(opt.kind), format, path);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

void add_synth_flags(CLI::App* cmd, SynthConfig& config) {
  cmd->add_option("--dim", config.dim, "Parameter dimension");
  cmd->add_option("--clients", config.num_clients, "Number of clients");
  cmd->add_option("--samples", config.samples_per_client,
                  "Samples per client");
  cmd->add_option("--nu-max", config.nu_max, "Input-scale upper bound");
  cmd->add_option("--eps-var", config.eps_var, "Label-noise variance");
  cmd->add_option("--seed", config.seed, "Generator seed");
}

void add_metric_flags(CLI::App* cmd, MetricParams& params) {
  cmd->add_option("--eta", params.eta, "Local step size");
  cmd->add_option("--local-steps", params.H_values,
                  "Local step counts (comma separated)")
      ->delimiter(',');
  cmd->add_option("--eval-point", params.eval_point,
                  "optimum | zero | path to a vector file");
  cmd->add_option("--beta", params.beta, "Bias-bound gradient coefficient");
  cmd->add_option("--gamma", params.gamma, "Bias-bound curvature coefficient");
}

// The parser does not apply per-subcommand config files itself, so key=value
// lines are expanded into --key=value flags before parsing; flags given
// explicitly on the command line win over file entries.
std::vector<std::string> with_config_expanded(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> files;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config") {
      if (it + 1 == args.end())
        throw std::invalid_argument("--config requires a file path");
      files.push_back(*(it + 1));
      it = args.erase(it, it + 2);
    } else if (it->rfind("--config=", 0) == 0) {
      files.push_back(it->substr(9));
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  const auto strip = [](const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  for (const std::string& file : files) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("cannot open config file " + file);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string text = strip(line);
      if (text.empty() || text[0] == '#' || text[0] == ';') continue;
      const auto eq = text.find('=');
      const std::string key =
          eq == std::string::npos ? std::string() : strip(text.substr(0, eq));
      if (key.empty())
        throw std::invalid_argument(file + ":" + std::to_string(lineno) +
                                    ": expected key=value");
      const std::string flag = "--" + key;
      const auto given = [&flag](const std::string& arg) {
        return arg == flag || arg.rfind(flag + "=", 0) == 0;
      };
      if (std::any_of(args.begin(), args.end(), given)) continue;
      args.push_back(flag + "=" + strip(text.substr(eq + 1)));
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "federated-averaging simulator: synthetic problems, local-update "
      "runs, heterogeneity metrics, and convergence-bound checks"};
  app.require_subcommand(1);

  int threads = 1;
  std::string out_dir_raw = ".";
  app.add_option("--threads", threads, "Worker threads (results identical)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", out_dir_raw,
                 "Base directory for outputs (env FEDSIM_OUT_DIR)")
      ->envname("FEDSIM_OUT_DIR");

  GenerateOptions gen;
  auto* cmd_gen = app.add_subcommand("generate",
                                     "Generate a synthetic problem file");
  add_synth_flags(cmd_gen, gen.config);
  cmd_gen->add_flag("--skip-samples", gen.skip_samples,
                    "Do not store raw samples in the problem file");
  cmd_gen->add_option("-o,--output", gen.output, "Problem file path");

  RunOptions run;
  auto* cmd_run_p = app.add_subcommand("run", "Run federated averaging");
  cmd_run_p->add_option("--problem", run.problem, "Problem file")->required();
  cmd_run_p->add_option("--alpha", run.config.alpha, "Server step size");
  cmd_run_p->add_option("--eta", run.config.eta, "Local step size");
  cmd_run_p->add_option("--local-steps", run.config.local_steps,
                        "Local steps per round");
  cmd_run_p->add_option("--rounds", run.config.rounds, "Rounds");
  cmd_run_p->add_option("--mode", run.mode, "local-gd | local-sgd");
  cmd_run_p->add_option("--sample", run.config.sample_size,
                        "Clients sampled per round (0 = all)");
  cmd_run_p->add_option("--sigma", run.sigma,
                        "Gradient-noise standard deviation (local-sgd)");
  cmd_run_p->add_option("--batch", run.batch,
                        "Minibatch size (local-sgd; overrides --sigma)");
  cmd_run_p->add_option("--seed", run.config.seed, "Noise / sampling seed");
  cmd_run_p->add_option("-o,--output", run.output, "Output CSV");

  MetricsOptions met;
  auto* cmd_met = app.add_subcommand("metrics",
                                     "Heterogeneity metrics vs local steps");
  cmd_met->add_option("--problem", met.problem, "Problem file")->required();
  add_metric_flags(cmd_met, met.params);
  cmd_met->add_option("-o,--output", met.output, "Output CSV");

  BoundsOptions bnd;
  auto* cmd_bnd = app.add_subcommand(
      "bounds", "Check a run CSV against the distance bound");
  cmd_bnd->add_option("--run-csv", bnd.run_csv, "Run CSV to check")
      ->required();
  cmd_bnd->add_option("--problem", bnd.problem, "Problem file")->required();
  cmd_bnd->add_option("--alpha", bnd.alpha, "Server step size of the run");
  cmd_bnd->add_option("--eta", bnd.eta,
                      "Local step size (0 derives min{1/L,1/(mu H)}/2)");
  cmd_bnd->add_option("--local-steps", bnd.local_steps, "Local steps");
  cmd_bnd->add_option("--sigma", bnd.sigma,
                      "Gradient-noise standard deviation of the run");
  cmd_bnd->add_option("-o,--output", bnd.output, "Output CSV");

  SweepOptions swp;
  auto* cmd_swp = app.add_subcommand("sweep", "Run a named experiment recipe");
  cmd_swp->add_option("recipe", swp.recipe,
                      "drift-vs-H | dissimilarity-sweep | "
                      "convergence-compare | scaling-nM | bound-check")
      ->required();
  cmd_swp->add_option("--seeds", swp.spec.seeds, "Seeds (comma separated)")
      ->delimiter(',');
  cmd_swp->add_option("--problem", swp.spec.problem_file,
                      "Problem file (instead of generating)");
  add_synth_flags(cmd_swp, swp.spec.synth);
  add_metric_flags(cmd_swp, swp.spec.metrics);
  cmd_swp->add_option("--grid-n", swp.spec.grid_samples,
                      "scaling-nM: samples-per-client grid")
      ->delimiter(',');
  cmd_swp->add_option("--grid-m", swp.spec.grid_clients,
                      "scaling-nM: client-count grid")
      ->delimiter(',');
  cmd_swp->add_option("--scaling-steps", swp.spec.scaling_local_steps,
                      "scaling-nM: local steps defining the drift");
  cmd_swp->add_option("--levels", swp.spec.noise_levels,
                      "dissimilarity-sweep: label-noise variances")
      ->delimiter(',');
  cmd_swp->add_option("--run-mode", swp.run_modes,
                      "convergence-compare: local-gd | local-sgd (repeat "
                      "for several runs)")
      ->delimiter(',');
  cmd_swp->add_option("--run-alpha", swp.run_alpha, "convergence: alpha");
  cmd_swp->add_option("--run-eta", swp.run_eta, "convergence: eta");
  cmd_swp->add_option("--run-steps", swp.run_steps, "convergence: H");
  cmd_swp->add_option("--run-rounds", swp.run_rounds, "convergence: rounds");
  cmd_swp->add_option("--run-sigma", swp.run_sigma, "convergence: noise sd");
  cmd_swp->add_option("--run-batch", swp.run_batch,
                      "convergence: minibatch size");
  cmd_swp->add_option("--gd-lr", swp.spec.gd_lr,
                      "convergence: GD step (0 = 1/L)");
  cmd_swp->add_option("--mb-lr", swp.spec.baseline_lr,
                      "convergence: minibatch-SGD step (0 = 1/L)");
  cmd_swp->add_option("--bound-alpha", swp.spec.bound_alpha,
                      "bound-check: alpha");
  cmd_swp->add_option("--bound-eta", swp.spec.bound_eta,
                      "bound-check: eta (0 derives from the problem)");
  cmd_swp->add_option("--bound-steps", swp.spec.bound_local_steps,
                      "bound-check: H");
  cmd_swp->add_option("--bound-rounds", swp.spec.bound_rounds,
                      "bound-check: rounds");
  cmd_swp->add_option("--bound-sigma-sq", swp.spec.bound_sigma_sq,
                      "bound-check: noise variance");

  PlotOptions plt;
  auto* cmd_plt = app.add_subcommand("plot", "Render a recipe CSV");
  cmd_plt->add_option("--input", plt.input, "CSV to plot")->required();
  cmd_plt->add_option("--kind", plt.kind, "Recipe name of the CSV")
      ->required();
  cmd_plt->add_option("--format", plt.format, "svg | gnuplot");
  cmd_plt->add_option("-o,--output", plt.output, "Output file");

  std::string config_file;  // consumed before parsing; listed for --help
  for (CLI::App* cmd :
       {cmd_gen, cmd_run_p, cmd_met, cmd_bnd, cmd_swp, cmd_plt}) {
    cmd->add_option("--config", config_file,
                    "Key=value file supplying defaults for these flags");
    cmd->fallthrough();
  }

  app.name(argv[0]);
  try {
    std::vector<std::string> args = with_config_expanded(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    set_num_threads(threads);
    const fs::path out_dir = out_dir_raw;
    if (cmd_gen->parsed()) return cmd_generate(gen, out_dir);
    if (cmd_run_p->parsed()) return cmd_run(run, out_dir);
    if (cmd_met->parsed()) return cmd_metrics(met, out_dir);
    if (cmd_bnd->parsed()) return cmd_bounds(bnd, out_dir);
    if (cmd_swp->parsed()) return cmd_sweep(swp, out_dir);
    if (cmd_plt->parsed()) return cmd_plot(plt, out_dir);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
