#pragma once

#include <cstdint>
#include <vector>

#include "fedsim/objective.hpp"

namespace fedsim {

enum class UpdateMode { kDeterministic, kStochastic };

// All iterates of one client's local run: iterates[0] is the start point and
// iterates[H] the endpoint after H steps of length eta.
struct LocalTrajectory {
  Vector start;
  std::vector<Vector> iterates;
  double eta = 0.0;
  int local_steps = 0;
  UpdateMode mode = UpdateMode::kDeterministic;

  const Vector& endpoint() const { return iterates.back(); }
};

// H exact gradient steps on client c. Throws DivergenceError if an iterate
// stops being finite.
LocalTrajectory run_local_gd(const FederatedProblem& problem, int c,
                             const Vector& start, double eta, int local_steps);

// Same loop with stochastic gradients from `noise`, drawn off `stream`.
LocalTrajectory run_local_sgd(const FederatedProblem& problem, int c,
                              const Vector& start, double eta, int local_steps,
                              const NoiseModel& noise, rng::Stream& stream);

// Endpoint-only variants; identical arithmetic without storing the path.
Vector local_gd_endpoint(const FederatedProblem& problem, int c,
                         const Vector& start, double eta, int local_steps);
Vector local_sgd_endpoint(const FederatedProblem& problem, int c,
                          const Vector& start, double eta, int local_steps,
                          const NoiseModel& noise, rng::Stream& stream);

// (start - endpoint) / (eta * H): the update a server sees from one client,
// rescaled to gradient units.
Vector pseudo_gradient(const Vector& start, const Vector& endpoint, double eta,
                       int local_steps);
Vector pseudo_gradient(const LocalTrajectory& trajectory);

// Gap between the exact gradient at the start and the client's deterministic
// pseudo-gradient. Computed both directly and as the average over local
// steps of (grad at start - grad at step); the two routes must agree to
// 1e-10 or a std::logic_error flags the implementation bug.
Vector gradient_bias(const FederatedProblem& problem, int c,
                     const Vector& start, double eta, int local_steps);

// Monte Carlo estimate of (deterministic endpoint - mean stochastic
// endpoint) / (eta * H), with the standard error of its norm estimated from
// the per-coordinate endpoint spread. `replicates` must be >= 2.
struct IterateBiasEstimate {
  Vector value;
  double standard_error = 0.0;
};

IterateBiasEstimate iterate_bias(const FederatedProblem& problem, int c,
                                 const Vector& start, double eta,
                                 int local_steps, const NoiseModel& noise,
                                 int replicates, std::uint64_t seed);

}  // namespace fedsim
