#include "fedsim/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "fedsim/linalg.hpp"
#include "fedsim/parallel.hpp"

namespace fedsim {

std::vector<Vector> closed_form_local_gd(const FederatedProblem& problem,
                                         double eta, int local_steps,
                                         int rounds, const Vector& w0) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (rounds < 0) throw std::invalid_argument("rounds must be >= 0");
  if (w0.size() != problem.dim())
    throw std::invalid_argument("w0 has wrong dimension");

  const int d = problem.dim();
  const int M = problem.num_clients();
  const Matrix identity = Matrix::Identity(d, d);
  const Vector& opt = problem.optimum();

  // avg_c (I - eta A_c)^H and the optimum's averaged local-run displacement
  // avg_c [I - (I - eta A_c)^H] (opt - local_min_c)  (= eta H g_drift).
  std::vector<Matrix> powers(M);
  parallel_for(M, [&](std::size_t c) {
    powers[c] = matrix_power(
        identity - eta * problem.client(c).curvature(), local_steps);
  });
  Matrix transfer = Matrix::Zero(d, d);
  Vector drift_step = Vector::Zero(d);
  for (int c = 0; c < M; ++c) {
    const double p = problem.client(c).weight();
    transfer += p * powers[c];
    drift_step +=
        p * ((identity - powers[c]) * (opt - problem.client(c).local_minimizer()));
  }

  std::vector<Vector> iterates;
  iterates.reserve(rounds + 1);
  iterates.push_back(w0);
  Vector error = w0 - opt;
  for (int t = 0; t < rounds; ++t) {
    error = transfer * error - drift_step;
    iterates.push_back(opt + error);
  }
  return iterates;
}

EffectiveConstants pseudo_gradient_constants(double eta, double mu,
                                             int local_steps) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (eta * mu > 1.0)
    throw std::invalid_argument("eta * mu must be <= 1");
  const double decay = std::pow(1.0 - eta * mu, local_steps);
  const double scale = eta * local_steps;
  return {(1.0 - decay) / scale, (1.0 + decay) / scale};
}

double biased_descent_loss_bound(double alpha, double eta, int local_steps,
                                 double mu, int rounds, double initial_gap,
                                 const std::vector<double>& bias_sq_history) {
  if (!(alpha > 0.0) || !(eta > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("alpha, eta, mu must be > 0");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (bias_sq_history.size() != static_cast<std::size_t>(rounds))
    throw std::invalid_argument("bias history length must equal rounds");

  const double contraction = 1.0 - alpha * eta * local_steps * mu;
  double bias_total = 0.0;
  for (double b : bias_sq_history) bias_total += b;
  return std::pow(contraction, rounds) * initial_gap +
         bias_total / (2.0 * mu * rounds);
}

BoundTrace stochastic_distance_bound(double alpha, double eta, int local_steps,
                                     double mu, double L, int rounds,
                                     double initial_dist_sq, double var_max,
                                     double delta_sq_max, double rho) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (rounds < 0) throw std::invalid_argument("rounds must be >= 0");
  if (alpha > 0.125 + 1e-12)
    throw std::invalid_argument("precondition violated: alpha <= 1/8");
  if (eta * L > 1.0 + 1e-12)
    throw std::invalid_argument("precondition violated: eta <= 1/L");
  if (eta * mu * local_steps > 1.0 + 1e-12)
    throw std::invalid_argument("precondition violated: eta <= 1/(mu*H)");

  BoundTrace trace;
  trace.contraction = 1.0 - 0.5 * alpha * eta * local_steps * mu;
  trace.initial_dist_sq = initial_dist_sq;
  trace.variance_term = 2.0 * alpha * eta * local_steps * var_max / mu;
  trace.iterate_bias_term = 20.0 * delta_sq_max / (mu * mu);
  trace.drift_term = 20.0 * rho * rho / (mu * mu);
  const double floor =
      trace.variance_term + trace.iterate_bias_term + trace.drift_term;
  trace.bound.reserve(rounds + 1);
  for (int t = 0; t <= rounds; ++t)
    trace.bound.push_back(std::pow(trace.contraction, t) * initial_dist_sq +
                          floor);
  return trace;
}

double pseudo_gradient_variance_bound(double sigma_sq, int num_clients,
                                      int local_steps) {
  if (!(sigma_sq >= 0.0)) throw std::invalid_argument("sigma_sq must be >= 0");
  if (num_clients < 1) throw std::invalid_argument("num_clients must be >= 1");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  return 2.0 * sigma_sq / (static_cast<double>(num_clients) * local_steps);
}

double iterate_bias_sq_bound(double eta, double L, double sigma_sq,
                             int local_steps) {
  if (!(eta >= 0.0) || !(L >= 0.0) || !(sigma_sq >= 0.0))
    throw std::invalid_argument("eta, L, sigma_sq must be >= 0");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  return eta * eta * L * L * sigma_sq * (local_steps - 1);
}

double fedavg_rate(UpdateMode mode, double kappa, int local_steps, int rounds,
                   double rho, double sigma_sq, int num_clients) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  const double T = rounds;
  const double H = local_steps;
  if (mode == UpdateMode::kDeterministic)
    return std::exp(-(T / (16.0 * kappa)) * std::min(kappa, H)) + rho * rho;
  if (num_clients < 1) throw std::invalid_argument("num_clients must be >= 1");
  return sigma_sq / (num_clients * H * T) + sigma_sq / (H * T * T) + rho * rho;
}

double fedavg_rate_quadratic(double kappa, int local_steps, int rounds,
                             int num_clients, double sigma_sq, double rho) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (num_clients < 1) throw std::invalid_argument("num_clients must be >= 1");
  const double T = rounds;
  const double H = local_steps;
  return std::exp(-(T / (16.0 * kappa)) * std::min(kappa, H)) +
         sigma_sq / (num_clients * H * T) + rho * rho;
}

double lr_schedule_log_factor(double r0, double mu, double L, double sigma_sq,
                              int num_clients, int local_steps, int rounds) {
  if (!(r0 > 0.0)) throw std::invalid_argument("r0 must be > 0");
  if (!(mu > 0.0) || !(L > 0.0)) throw std::invalid_argument("mu, L must be > 0");
  if (!(sigma_sq > 0.0))
    throw std::invalid_argument("sigma_sq must be > 0 for the tuned schedule");
  if (num_clients < 1 || local_steps < 1 || rounds < 1)
    throw std::invalid_argument("num_clients, local_steps, rounds must be >= 1");
  const double T = rounds;
  const double H = local_steps;
  const double a = r0 * mu * mu * num_clients * H * T / (8.0 * sigma_sq);
  const double b = r0 * std::pow(mu, 4) * H * T * T / (1280.0 * L * L * sigma_sq);
  return 2.0 * std::log(std::max(a, b));
}

double rounds_to_accuracy(const std::string& method, double kappa,
                          int local_steps, double epsilon) {
  if (!(kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (method == "gd") return kappa * std::log(1.0 / epsilon);
  if (method == "fedavg-ours")
    return std::max(1.0, kappa / local_steps) * std::log(1.0 / epsilon);
  if (method == "fedavg-koloskova" || method == "fedavg-woodworth")
    return 1.0 / (epsilon * epsilon);
  throw std::invalid_argument("unknown method: " + method);
}

}  // namespace fedsim
