#include "fedsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fedsim/errors.hpp"
#include "fedsim/linalg.hpp"
#include "fedsim/localupdate.hpp"
#include "fedsim/parallel.hpp"

namespace fedsim {

double gradient_dissimilarity(const FederatedProblem& problem,
                              const Vector& w) {
  const Vector global = problem.global_gradient(w);
  std::vector<double> terms(problem.num_clients());
  parallel_for(problem.num_clients(), [&](std::size_t c) {
    terms[c] = (problem.local_gradient(static_cast<int>(c), w) - global)
                   .squaredNorm();
  });
  double total = 0.0;
  for (int c = 0; c < problem.num_clients(); ++c)
    total += problem.client(c).weight() * terms[c];
  return total;
}

double drift_at_optimum(const FederatedProblem& problem, double eta,
                        int local_steps) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  const Vector& opt = problem.optimum();
  std::vector<Vector> pseudo(problem.num_clients());
  parallel_for(problem.num_clients(), [&](std::size_t c) {
    const Vector end = local_gd_endpoint(problem, static_cast<int>(c), opt,
                                         eta, local_steps);
    pseudo[c] = pseudo_gradient(opt, end, eta, local_steps);
  });
  Vector mean = Vector::Zero(problem.dim());
  for (int c = 0; c < problem.num_clients(); ++c)
    mean += problem.client(c).weight() * pseudo[c];
  return mean.norm();
}

double drift_at_optimum_closed_form(const FederatedProblem& problem,
                                    double eta, int local_steps) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  const Vector& opt = problem.optimum();
  const Matrix identity = Matrix::Identity(problem.dim(), problem.dim());

  std::vector<Vector> mapped(problem.num_clients());
  parallel_for(problem.num_clients(), [&](std::size_t ci) {
    const int c = static_cast<int>(ci);
    const Matrix step = identity - eta * problem.client(c).curvature();
    const Matrix transfer =
        identity - geometric_matrix_sum(step, local_steps) / local_steps;
    mapped[ci] = transfer * problem.local_gradient(c, opt);
  });
  Vector mean = Vector::Zero(problem.dim());
  for (int c = 0; c < problem.num_clients(); ++c)
    mean += problem.client(c).weight() * mapped[c];
  const double closed = mean.norm();

  const double simulated = drift_at_optimum(problem, eta, local_steps);
  if (std::abs(closed - simulated) > 1e-10)
    throw std::logic_error(
        "drift routes disagree beyond 1e-10 (implementation bug): closed " +
        std::to_string(closed) + " vs simulated " + std::to_string(simulated));
  return closed;
}

double dissimilarity_bound_curve(double L, double eta, int local_steps,
                                 double zeta_sq, double grad_norm_sq,
                                 double beta, double gamma) {
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  const double h = static_cast<double>(local_steps);
  return beta * grad_norm_sq + gamma * eta * eta * L * L * h * h * zeta_sq;
}

HeterogeneityReport bias_curves(const FederatedProblem& problem,
                                const Vector& w, double eta,
                                const std::vector<int>& H_values, double beta,
                                double gamma) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (H_values.empty()) throw std::invalid_argument("H list is empty");
  for (int h : H_values)
    if (h < 1) throw std::invalid_argument("every H must be >= 1");
  if (w.size() != problem.dim())
    throw std::invalid_argument("evaluation point has wrong dimension");

  std::vector<int> sorted = H_values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const int max_steps = sorted.back();

  const Vector& opt = problem.optimum();
  const bool at_optimum = (w == opt);
  const int M = problem.num_clients();

  // One pass per client records the endpoint at every requested H; a second
  // pass from the optimum feeds the drift column when w differs from it.
  struct PerClient {
    std::vector<Vector> ends_at_w;
    std::vector<Vector> ends_at_opt;
    Vector grad_at_w;
  };
  std::vector<PerClient> data(M);

  auto endpoints_along = [&](int c, const Vector& from) {
    std::vector<Vector> ends;
    ends.reserve(sorted.size());
    Vector iterate = from;
    std::size_t next = 0;
    for (int h = 1; h <= max_steps && next < sorted.size(); ++h) {
      iterate -= eta * problem.local_gradient(c, iterate);
      if (!iterate.allFinite())
        throw DivergenceError("bias sweep diverged at local step " +
                                  std::to_string(h),
                              h);
      if (sorted[next] == h) {
        ends.push_back(iterate);
        ++next;
      }
    }
    return ends;
  };

  parallel_for(M, [&](std::size_t ci) {
    const int c = static_cast<int>(ci);
    data[ci].grad_at_w = problem.local_gradient(c, w);
    data[ci].ends_at_w = endpoints_along(c, w);
    if (!at_optimum) data[ci].ends_at_opt = endpoints_along(c, opt);
  });

  HeterogeneityReport report;
  report.H_values = H_values;
  report.eta = eta;
  report.eval_point = w;
  report.grad_dissimilarity = gradient_dissimilarity(problem, w);
  const double grad_norm_sq = problem.global_gradient(w).squaredNorm();
  const double L = problem.smoothness();

  for (int steps : H_values) {
    const std::size_t k =
        std::lower_bound(sorted.begin(), sorted.end(), steps) - sorted.begin();
    Vector mean_bias = Vector::Zero(problem.dim());
    Vector mean_pseudo_at_opt = Vector::Zero(problem.dim());
    double mean_square = 0.0;
    for (int c = 0; c < M; ++c) {
      const double p = problem.client(c).weight();
      const Vector bias =
          data[c].grad_at_w -
          pseudo_gradient(w, data[c].ends_at_w[k], eta, steps);
      mean_bias += p * bias;
      mean_square += p * bias.squaredNorm();
      const Vector& opt_end =
          at_optimum ? data[c].ends_at_w[k] : data[c].ends_at_opt[k];
      mean_pseudo_at_opt += p * pseudo_gradient(opt, opt_end, eta, steps);
    }
    report.squared_mean_bias.push_back(mean_bias.squaredNorm());
    report.mean_square_bias.push_back(mean_square);
    report.drift_at_optimum.push_back(mean_pseudo_at_opt.norm());
    report.quadratic_bound.push_back(dissimilarity_bound_curve(
        L, eta, steps, report.grad_dissimilarity, grad_norm_sq, beta, gamma));
  }
  return report;
}

DriftScalingTable drift_scaling_experiment(
    const std::vector<std::pair<int, int>>& grid_n_m,
    const std::vector<std::uint64_t>& seeds, const SynthConfig& base,
    double eta, int local_steps) {
  if (grid_n_m.empty()) throw std::invalid_argument("empty grid");
  if (seeds.size() < 5)
    throw std::invalid_argument("scaling study needs at least 5 seeds");

  DriftScalingTable table;
  for (const auto& [n, clients] : grid_n_m) {
    SynthConfig cfg = base;
    cfg.samples_per_client = n;
    cfg.num_clients = clients;
    cfg.attach_samples = false;  // metrics need only (A, b)
    DriftScalingRow row;
    row.samples_per_client = n;
    row.num_clients = clients;
    for (std::uint64_t seed : seeds) {
      cfg.seed = seed;
      const FederatedProblem problem = generate(cfg);
      row.drift_by_seed.push_back(drift_at_optimum(problem, eta, local_steps));
      row.dissimilarity_by_seed.push_back(
          gradient_dissimilarity(problem, problem.optimum()));
      row.mean_drift += row.drift_by_seed.back();
      row.mean_dissimilarity += row.dissimilarity_by_seed.back();
    }
    row.mean_drift /= seeds.size();
    row.mean_dissimilarity /= seeds.size();
    table.rows.push_back(std::move(row));
  }

  std::vector<double> log_nm, log_drift;
  for (const auto& row : table.rows) {
    log_nm.push_back(std::log(static_cast<double>(row.samples_per_client) *
                              row.num_clients));
    log_drift.push_back(std::log(row.mean_drift));
  }
  table.drift_slope = regression_slope(log_nm, log_drift);

  // Dissimilarity scales with n alone; regress within fixed-M groups.
  std::vector<int> m_values;
  for (const auto& row : table.rows)
    if (std::find(m_values.begin(), m_values.end(), row.num_clients) ==
        m_values.end())
      m_values.push_back(row.num_clients);
  double slope_sum = 0.0;
  int slope_count = 0;
  for (int m : m_values) {
    std::vector<double> log_n, log_dissim;
    for (const auto& row : table.rows)
      if (row.num_clients == m) {
        log_n.push_back(std::log(static_cast<double>(row.samples_per_client)));
        log_dissim.push_back(std::log(row.mean_dissimilarity));
      }
    std::vector<double> unique_n = log_n;
    std::sort(unique_n.begin(), unique_n.end());
    unique_n.erase(std::unique(unique_n.begin(), unique_n.end()),
                   unique_n.end());
    if (unique_n.size() < 2) continue;
    slope_sum += regression_slope(log_n, log_dissim);
    ++slope_count;
  }
  table.dissimilarity_slope =
      slope_count ? slope_sum / slope_count
                  : std::numeric_limits<double>::quiet_NaN();
  return table;
}

}  // namespace fedsim
