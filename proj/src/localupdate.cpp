#include "fedsim/localupdate.hpp"

#include <cmath>
#include <stdexcept>

#include "fedsim/errors.hpp"
#include "fedsim/parallel.hpp"

namespace fedsim {

namespace {

void check_local_args(const FederatedProblem& problem, int c,
                      const Vector& start, double eta, int local_steps) {
  if (c < 0 || c >= problem.num_clients())
    throw std::invalid_argument("client index out of range");
  if (start.size() != problem.dim())
    throw std::invalid_argument("start point has wrong dimension");
  if (!(eta > 0.0)) throw std::invalid_argument("local step size must be > 0");
  if (local_steps < 1)
    throw std::invalid_argument("local step count must be >= 1");
}

void check_finite(const Vector& w, int step) {
  if (!w.allFinite())
    throw DivergenceError(
        "local update produced a non-finite iterate at step " +
            std::to_string(step),
        step);
}

}  // namespace

LocalTrajectory run_local_gd(const FederatedProblem& problem, int c,
                             const Vector& start, double eta,
                             int local_steps) {
  check_local_args(problem, c, start, eta, local_steps);
  LocalTrajectory traj;
  traj.start = start;
  traj.eta = eta;
  traj.local_steps = local_steps;
  traj.mode = UpdateMode::kDeterministic;
  traj.iterates.reserve(local_steps + 1);
  traj.iterates.push_back(start);
  Vector w = start;
  for (int h = 0; h < local_steps; ++h) {
    w -= eta * problem.local_gradient(c, w);
    check_finite(w, h + 1);
    traj.iterates.push_back(w);
  }
  return traj;
}

LocalTrajectory run_local_sgd(const FederatedProblem& problem, int c,
                              const Vector& start, double eta, int local_steps,
                              const NoiseModel& noise, rng::Stream& stream) {
  check_local_args(problem, c, start, eta, local_steps);
  LocalTrajectory traj;
  traj.start = start;
  traj.eta = eta;
  traj.local_steps = local_steps;
  traj.mode = UpdateMode::kStochastic;
  traj.iterates.reserve(local_steps + 1);
  traj.iterates.push_back(start);
  Vector w = start;
  for (int h = 0; h < local_steps; ++h) {
    w -= eta * problem.stochastic_gradient(c, w, noise, stream);
    check_finite(w, h + 1);
    traj.iterates.push_back(w);
  }
  return traj;
}

Vector local_gd_endpoint(const FederatedProblem& problem, int c,
                         const Vector& start, double eta, int local_steps) {
  check_local_args(problem, c, start, eta, local_steps);
  Vector w = start;
  for (int h = 0; h < local_steps; ++h) {
    w -= eta * problem.local_gradient(c, w);
    check_finite(w, h + 1);
  }
  return w;
}

Vector local_sgd_endpoint(const FederatedProblem& problem, int c,
                          const Vector& start, double eta, int local_steps,
                          const NoiseModel& noise, rng::Stream& stream) {
  check_local_args(problem, c, start, eta, local_steps);
  Vector w = start;
  for (int h = 0; h < local_steps; ++h) {
    w -= eta * problem.stochastic_gradient(c, w, noise, stream);
    check_finite(w, h + 1);
  }
  return w;
}

Vector pseudo_gradient(const Vector& start, const Vector& endpoint, double eta,
                       int local_steps) {
  if (!(eta > 0.0) || local_steps < 1)
    throw std::invalid_argument("pseudo_gradient needs eta > 0 and steps >= 1");
  return (start - endpoint) / (eta * local_steps);
}

Vector pseudo_gradient(const LocalTrajectory& trajectory) {
  return pseudo_gradient(trajectory.start, trajectory.endpoint(),
                         trajectory.eta, trajectory.local_steps);
}

Vector gradient_bias(const FederatedProblem& problem, int c,
                     const Vector& start, double eta, int local_steps) {
  const LocalTrajectory traj =
      run_local_gd(problem, c, start, eta, local_steps);
  const Vector grad_at_start = problem.local_gradient(c, start);
  const Vector direct = grad_at_start - pseudo_gradient(traj);

  Vector averaged = Vector::Zero(problem.dim());
  for (int h = 0; h < local_steps; ++h)
    averaged += grad_at_start - problem.local_gradient(c, traj.iterates[h]);
  averaged /= local_steps;

  if ((direct - averaged).norm() > 1e-10 * (1.0 + direct.norm()))
    throw std::logic_error(
        "gradient bias routes disagree beyond tolerance (implementation bug)");
  return direct;
}

IterateBiasEstimate iterate_bias(const FederatedProblem& problem, int c,
                                 const Vector& start, double eta,
                                 int local_steps, const NoiseModel& noise,
                                 int replicates, std::uint64_t seed) {
  check_local_args(problem, c, start, eta, local_steps);
  if (replicates < 2)
    throw std::invalid_argument("iterate_bias needs at least 2 replicates");

  const Vector exact_end =
      local_gd_endpoint(problem, c, start, eta, local_steps);

  std::vector<Vector> endpoints(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    rng::Stream stream(seed, rng::Tag::kEstimator,
                       (static_cast<std::uint64_t>(c) << 32) | r);
    endpoints[r] =
        local_sgd_endpoint(problem, c, start, eta, local_steps, noise, stream);
  });

  Vector mean = Vector::Zero(problem.dim());
  for (const auto& e : endpoints) mean += e;
  mean /= replicates;

  Vector variance = Vector::Zero(problem.dim());
  for (const auto& e : endpoints)
    variance += (e - mean).cwiseAbs2();
  variance /= (replicates - 1);

  const double scale = eta * local_steps;
  IterateBiasEstimate est;
  est.value = (exact_end - mean) / scale;
  est.standard_error = std::sqrt(variance.sum() / replicates) / scale;
  return est;
}

}  // namespace fedsim
