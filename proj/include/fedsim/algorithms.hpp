#pragma once

#include <cstdint>
#include <vector>

#include "fedsim/localupdate.hpp"
#include "fedsim/objective.hpp"

namespace fedsim {

// One federated-averaging run: alpha is the server step applied to the
// averaged client displacement, eta/local_steps shape the client work,
// sample_size selects how many clients participate per round (0 = all, else
// uniform without replacement with weights renormalized over the draw).
struct RunConfig {
  double alpha = 1.0;
  double eta = 0.1;
  int local_steps = 1;
  int rounds = 1;
  UpdateMode mode = UpdateMode::kDeterministic;
  int sample_size = 0;
  NoiseModel noise;
  std::uint64_t seed = 0;

  void validate(int num_clients) const;
};

// Per-round trace, length rounds+1 with the initial point at index 0.
// pseudo_grad_norm[t] is the norm of the aggregated pseudo-gradient the
// server applied when leaving round t; the final entry, where no update
// follows, holds the deterministic full-participation value at the last
// model so the column always describes the same function of the iterate.
struct RunRecord {
  std::vector<Vector> models;
  std::vector<double> dist_sq;
  std::vector<double> loss_gap;
  std::vector<double> pseudo_grad_norm;

  int rounds() const { return static_cast<int>(models.size()) - 1; }
};

// Federated averaging: each round the (sampled) clients take local_steps
// local steps from the current model and the server moves by alpha times the
// weighted average displacement. The equivalent pseudo-gradient form of the
// update is recomputed each round and must agree to 1e-10.
RunRecord fedavg_run(const FederatedProblem& problem, const RunConfig& config,
                     const Vector& w0);

// Full-gradient descent on the global loss.
RunRecord gd_run(const FederatedProblem& problem, double lr, int rounds,
                 const Vector& w0);

// Centralized baseline matching FedAvg's per-round sample budget: every
// round averages num_clients * draws_per_client stochastic gradients at the
// current point and takes one step.
RunRecord minibatch_sgd_run(const FederatedProblem& problem, double lr,
                            int rounds, const Vector& w0,
                            const NoiseModel& noise, int draws_per_client,
                            std::uint64_t seed);

}  // namespace fedsim
