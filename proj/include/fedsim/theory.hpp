#pragma once

#include <string>
#include <vector>

#include "fedsim/localupdate.hpp"
#include "fedsim/objective.hpp"

namespace fedsim {

// Exact iterates of full-participation local GD with server step 1 on a
// quadratic problem, from the affine recursion
//   w^(t+1) - w_opt = [avg_c (I - eta A_c)^H] (w^(t) - w_opt) - eta H g_drift
// where g_drift is the averaged pseudo-gradient at the optimum. Returns
// rounds+1 vectors starting at w0. This is the oracle simulated runs are
// checked against.
std::vector<Vector> closed_form_local_gd(const FederatedProblem& problem,
                                         double eta, int local_steps,
                                         int rounds, const Vector& w0);

// Strong convexity and smoothness of the deterministic pseudo-gradient
// field, as functions of the underlying constants:
//   strong_convexity = [1 - (1 - eta mu)^H] / (eta H)
//   smoothness       = [1 + (1 - eta mu)^H] / (eta H)
// Requires 0 < eta * mu <= 1.
struct EffectiveConstants {
  double strong_convexity = 0.0;
  double smoothness = 0.0;
};
EffectiveConstants pseudo_gradient_constants(double eta, double mu,
                                             int local_steps);

// Loss-gap bound for deterministic federated averaging after `rounds`
// rounds, given the history of squared averaged-bias norms along the run:
//   (1 - alpha eta H mu)^T * initial_gap + (1 / (2 mu T)) * sum_t bias_sq[t].
// Callers must ensure alpha * eta * H * L <= 1 for the bound to mean
// anything; the history length must equal `rounds`.
double biased_descent_loss_bound(double alpha, double eta, int local_steps,
                                 double mu, int rounds, double initial_gap,
                                 const std::vector<double>& bias_sq_history);

// The stochastic federated-averaging distance bound: a geometric term plus
// three constant floors. bound[t] applies to E|w^(t) - w_opt|^2.
struct BoundTrace {
  std::vector<double> bound;       // rounds+1 entries
  double contraction = 0.0;        // per-round geometric factor
  double initial_dist_sq = 0.0;
  double variance_term = 0.0;      // (2 alpha eta H / mu) * var_max
  double iterate_bias_term = 0.0;  // (20 / mu^2) * delta_sq_max
  double drift_term = 0.0;         // 20 rho^2 / mu^2
};

// Preconditions (each rejected by name): alpha <= 1/8,
// eta <= 1/L, eta <= 1/(mu H). var_max caps the variance of the aggregated
// pseudo-gradient, delta_sq_max the mean squared iterate bias, rho is the
// drift at the optimum.
BoundTrace stochastic_distance_bound(double alpha, double eta, int local_steps,
                                     double mu, double L, int rounds,
                                     double initial_dist_sq, double var_max,
                                     double delta_sq_max, double rho);

// 2 sigma^2 / (M H): cap on the aggregated pseudo-gradient's variance under
// per-draw noise of total variance sigma^2.
double pseudo_gradient_variance_bound(double sigma_sq, int num_clients,
                                      int local_steps);

// eta^2 L^2 sigma^2 (H - 1): cap on the mean squared iterate bias.
double iterate_bias_sq_bound(double eta, double L, double sigma_sq,
                             int local_steps);

// Asymptotic error after `rounds` rounds of federated averaging (prefactor
// 1; the theory hides absolute constants):
//   deterministic: exp(-(T/(16 kappa)) min{kappa, H}) + rho^2
//   stochastic:    sigma^2/(M H T) + sigma^2/(H T^2) + rho^2
double fedavg_rate(UpdateMode mode, double kappa, int local_steps, int rounds,
                   double rho, double sigma_sq = 0.0, int num_clients = 1);

// Quadratic-case rate with stochastic gradients: the geometric term and the
// variance floor together, exp(-(T/(16 kappa)) min{kappa, H}) +
// sigma^2/(M H T) + rho^2.
double fedavg_rate_quadratic(double kappa, int local_steps, int rounds,
                             int num_clients, double sigma_sq, double rho);

// Logarithmic factor of the tuned effective step size nu / (mu T):
//   nu = 2 ln(max{r0 mu^2 M H T / (8 sigma^2),
//                 r0 mu^4 H T^2 / (1280 L^2 sigma^2)}).
double lr_schedule_log_factor(double r0, double mu, double L, double sigma_sq,
                              int num_clients, int local_steps, int rounds);

// Communication rounds to reach accuracy epsilon when the drift is zero.
// method is one of "gd" (kappa log(1/eps)), "fedavg-ours"
// (max{1, kappa/H} log(1/eps)), "fedavg-koloskova" or "fedavg-woodworth"
// (both 1/eps^2).
double rounds_to_accuracy(const std::string& method, double kappa,
                          int local_steps, double epsilon);

}  // namespace fedsim
