#pragma once

#include <cstdint>

#include "fedsim/objective.hpp"

namespace fedsim {

// Synthetic federated least-squares generator. Per client c:
//   input scale   nu_c ~ U(0, nu_max)
//   inputs        x_i  ~ U(0, nu_c) per coordinate, i = 1..samples_per_client
//   label noise   e_i  ~ N(0, eps_var)
//   labels        y_i  = <x_i, w_ref> + e_i
//   curvature     A_c  = (1/n) sum_i x_i x_i'
//   shift         b_c  = (1/n) sum_i e_i x_i
// with one shared reference point w_ref ~ N(0, I) and uniform weights 1/M.
// Every draw is keyed by (seed, client, sample, coord), so generation is
// reproducible bit for bit regardless of thread count.
struct SynthConfig {
  int dim = 30;
  int num_clients = 100;
  int samples_per_client = 100;
  double nu_max = 5.0;
  double eps_var = 0.09;
  std::uint64_t seed = 0;
  // Keep (inputs, labels) on each client; required for minibatch gradients,
  // off for metric sweeps that only need (A, b).
  bool attach_samples = true;

  void validate() const;
};

// Builds the problem above. A client whose curvature comes out numerically
// singular (smallest eigenvalue <= 1e-12 of the largest) is redrawn with a
// fresh keyed sub-stream, up to 3 attempts; persistent failure raises
// SingularMatrixError.
FederatedProblem generate(const SynthConfig& config);

}  // namespace fedsim
