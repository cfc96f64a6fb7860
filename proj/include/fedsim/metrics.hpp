#pragma once

#include <cstdint>
#include <vector>

#include "fedsim/objective.hpp"
#include "fedsim/synthgen.hpp"

namespace fedsim {

// Heterogeneity quantities as functions of the local step count H, all
// evaluated on one problem at one point.
struct HeterogeneityReport {
  std::vector<int> H_values;
  double eta = 0.0;
  double grad_dissimilarity = 0.0;        // at eval_point
  std::vector<double> squared_mean_bias;  // |avg_c bias_c|^2 per H
  std::vector<double> mean_square_bias;   // avg_c |bias_c|^2 per H
  std::vector<double> drift_at_optimum;   // always at the optimum, per H
  std::vector<double> quadratic_bound;    // closed-form cap on the above
  Vector eval_point;
};

// avg_c |grad_c(w) - grad(w)|^2: the classic heterogeneity measure,
// evaluated exactly at w (no supremum is attempted).
double gradient_dissimilarity(const FederatedProblem& problem, const Vector& w);

// |avg_c pseudo_gradient_c| for local GD started at the global optimum: the
// fixed-point displacement that separates federated averaging from GD.
double drift_at_optimum(const FederatedProblem& problem, double eta,
                        int local_steps);

// Same quantity through the closed form available for quadratics: each
// client's pseudo-gradient at the optimum is a polynomial of its Hessian
// applied to its local gradient,
//   (1/H) sum_{h=0}^{H-1} [I - (I - eta A_c)^h] grad_c(w_opt).
// Cross-checks itself against the trajectory route to 1e-10 and throws
// std::logic_error on disagreement (a bug signal, not a data condition).
double drift_at_optimum_closed_form(const FederatedProblem& problem,
                                    double eta, int local_steps);

// beta * grad_norm_sq + gamma * eta^2 L^2 H^2 zeta_sq: the quadratic-in-H
// cap on the mean-square gradient bias. beta and gamma are caller-chosen
// (the theory guarantees existence, not values).
double dissimilarity_bound_curve(double L, double eta, int local_steps,
                                 double zeta_sq, double grad_norm_sq,
                                 double beta, double gamma);

// Fills a full report at w: bias curves for each H in H_values, drift at the
// optimum, the dissimilarity at w, and the quadratic bound with the given
// (beta, gamma). H values may be in any order; each must be >= 1.
HeterogeneityReport bias_curves(const FederatedProblem& problem,
                                const Vector& w, double eta,
                                const std::vector<int>& H_values,
                                double beta = 0.5, double gamma = 1.0);

// One grid point of the sample-size scaling study. The per-seed vectors
// follow the seed-list order used for the means.
struct DriftScalingRow {
  int samples_per_client = 0;  // n
  int num_clients = 0;         // M
  double mean_drift = 0.0;
  double mean_dissimilarity = 0.0;
  std::vector<double> drift_by_seed;
  std::vector<double> dissimilarity_by_seed;
};

struct DriftScalingTable {
  std::vector<DriftScalingRow> rows;
  // log-log regression slope of mean drift against n*M (expected near -1/2).
  double drift_slope = 0.0;
  // slope of log mean dissimilarity against log n within fixed-M groups,
  // averaged over groups (expected near -1); NaN when no M appears with two
  // distinct n values.
  double dissimilarity_slope = 0.0;
};

// Generates base-config problems at each (n, M) grid point for every seed,
// measures drift at the optimum and dissimilarity there, and averages over
// seeds. Needs >= 5 seeds so the means are stable enough to regress.
DriftScalingTable drift_scaling_experiment(
    const std::vector<std::pair<int, int>>& grid_n_m,
    const std::vector<std::uint64_t>& seeds, const SynthConfig& base,
    double eta, int local_steps);

}  // namespace fedsim
