#include "fedsim/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedsim/errors.hpp"
#include "fedsim/parallel.hpp"

namespace fedsim {

void RunConfig::validate(int num_clients) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (local_steps < 1) throw std::invalid_argument("local_steps must be >= 1");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (sample_size < 0 || sample_size > num_clients)
    throw std::invalid_argument(
        "sample size must lie in [1, num_clients], or 0 for full "
        "participation");
}

namespace {

struct TraceGuard {
  double limit = 0.0;

  explicit TraceGuard(double initial_dist_sq)
      : limit(1e12 * std::max(initial_dist_sq, 1.0)) {}

  void check(const Vector& w, double dist_sq, int round) const {
    if (!w.allFinite())
      throw DivergenceError(
          "global model became non-finite at round " + std::to_string(round),
          round);
    if (dist_sq > limit)
      throw DivergenceError(
          "squared distance to the optimum blew past 1e12 times its initial "
          "value at round " +
              std::to_string(round),
          round);
  }
};

void append_state(RunRecord& record, const FederatedProblem& problem,
                  const Vector& w) {
  record.models.push_back(w);
  record.dist_sq.push_back((w - problem.optimum()).squaredNorm());
  record.loss_gap.push_back(problem.global_loss_gap(w));
}

// Weighted average pseudo-gradient of deterministic local runs over all
// clients; the round-independent descriptor recorded for the final model.
double deterministic_pseudo_grad_norm(const FederatedProblem& problem,
                                      const Vector& w, double eta,
                                      int local_steps) {
  std::vector<Vector> ends(problem.num_clients());
  parallel_for(problem.num_clients(), [&](std::size_t c) {
    ends[c] =
        local_gd_endpoint(problem, static_cast<int>(c), w, eta, local_steps);
  });
  Vector mean = Vector::Zero(problem.dim());
  for (int c = 0; c < problem.num_clients(); ++c)
    mean += problem.client(c).weight() *
            pseudo_gradient(w, ends[c], eta, local_steps);
  return mean.norm();
}

// First `count` entries of a stream-driven partial Fisher-Yates shuffle of
// {0..total-1}, returned in ascending order for fixed aggregation order.
std::vector<int> sample_without_replacement(int total, int count,
                                            rng::Stream& stream) {
  std::vector<int> pool(total);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) {
    const auto j =
        i + static_cast<int>(stream.uniform_below(
                static_cast<std::uint64_t>(total - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

RunRecord fedavg_run(const FederatedProblem& problem, const RunConfig& config,
                     const Vector& w0) {
  config.validate(problem.num_clients());
  if (w0.size() != problem.dim())
    throw std::invalid_argument("w0 has wrong dimension");

  const int M = problem.num_clients();
  const bool sampled =
      config.sample_size > 0 && config.sample_size < M;
  const double step_scale = config.eta * config.local_steps;

  RunRecord record;
  record.models.reserve(config.rounds + 1);
  append_state(record, problem, w0);
  const TraceGuard guard(record.dist_sq.front());

  Vector w = w0;
  std::vector<int> everyone(M);
  std::iota(everyone.begin(), everyone.end(), 0);

  for (int t = 0; t < config.rounds; ++t) {
    std::vector<int> active = everyone;
    if (sampled) {
      rng::Stream picker(config.seed, rng::Tag::kClientSampling,
                         static_cast<std::uint64_t>(t));
      active = sample_without_replacement(M, config.sample_size, picker);
    }

    std::vector<Vector> displacement(active.size());
    parallel_for(active.size(), [&](std::size_t k) {
      const int c = active[k];
      Vector end;
      if (config.mode == UpdateMode::kDeterministic) {
        end = local_gd_endpoint(problem, c, w, config.eta, config.local_steps);
      } else {
        rng::Stream noise_stream(
            config.seed, rng::Tag::kGradientNoise,
            static_cast<std::uint64_t>(t) * M + static_cast<std::uint64_t>(c));
        end = local_sgd_endpoint(problem, c, w, config.eta,
                                 config.local_steps, config.noise,
                                 noise_stream);
      }
      displacement[k] = w - end;
    });

    double weight_sum = 1.0;
    if (sampled) {
      weight_sum = 0.0;
      for (int c : active) weight_sum += problem.client(c).weight();
    }

    Vector avg_displacement = Vector::Zero(problem.dim());
    Vector avg_pseudo_grad = Vector::Zero(problem.dim());
    for (std::size_t k = 0; k < active.size(); ++k) {
      const double p = problem.client(active[k]).weight() / weight_sum;
      avg_displacement += p * displacement[k];
      avg_pseudo_grad += p * (displacement[k] / step_scale);
    }

    // The same update in displacement form and in pseudo-gradient form;
    // their agreement is an algebraic identity the code must preserve.
    const Vector next = w - config.alpha * avg_displacement;
    const Vector via_pseudo_grad =
        w - (config.alpha * step_scale) * avg_pseudo_grad;
    if ((next - via_pseudo_grad).norm() > 1e-10 * (1.0 + w.norm()))
      throw std::logic_error(
          "displacement and pseudo-gradient update forms disagree "
          "(implementation bug) at round " +
          std::to_string(t));

    record.pseudo_grad_norm.push_back(avg_pseudo_grad.norm());
    w = next;
    append_state(record, problem, w);
    guard.check(w, record.dist_sq.back(), t + 1);
  }

  record.pseudo_grad_norm.push_back(deterministic_pseudo_grad_norm(
      problem, w, config.eta, config.local_steps));
  return record;
}

RunRecord gd_run(const FederatedProblem& problem, double lr, int rounds,
                 const Vector& w0) {
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be > 0");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (w0.size() != problem.dim())
    throw std::invalid_argument("w0 has wrong dimension");

  RunRecord record;
  record.models.reserve(rounds + 1);
  append_state(record, problem, w0);
  const TraceGuard guard(record.dist_sq.front());

  Vector w = w0;
  for (int t = 0; t < rounds; ++t) {
    const Vector g = problem.global_gradient(w);
    record.pseudo_grad_norm.push_back(g.norm());
    w = w - lr * g;
    append_state(record, problem, w);
    guard.check(w, record.dist_sq.back(), t + 1);
  }
  record.pseudo_grad_norm.push_back(problem.global_gradient(w).norm());
  return record;
}

RunRecord minibatch_sgd_run(const FederatedProblem& problem, double lr,
                            int rounds, const Vector& w0,
                            const NoiseModel& noise, int draws_per_client,
                            std::uint64_t seed) {
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be > 0");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (draws_per_client < 1)
    throw std::invalid_argument("draws_per_client must be >= 1");
  if (w0.size() != problem.dim())
    throw std::invalid_argument("w0 has wrong dimension");

  const int M = problem.num_clients();
  const bool exact = noise.kind == NoiseModel::Kind::kNone ||
                     (noise.kind == NoiseModel::Kind::kAdditiveGaussian &&
                      noise.sigma_sq == 0.0);

  RunRecord record;
  record.models.reserve(rounds + 1);
  append_state(record, problem, w0);
  const TraceGuard guard(record.dist_sq.front());

  Vector w = w0;
  for (int t = 0; t < rounds; ++t) {
    std::vector<Vector> estimate(M);
    parallel_for(M, [&](std::size_t ci) {
      const int c = static_cast<int>(ci);
      if (exact) {
        estimate[ci] = problem.local_gradient(c, w);
        return;
      }
      rng::Stream stream(seed, rng::Tag::kGradientNoise,
                         static_cast<std::uint64_t>(t) * M +
                             static_cast<std::uint64_t>(c));
      Vector sum = Vector::Zero(problem.dim());
      for (int h = 0; h < draws_per_client; ++h)
        sum += problem.stochastic_gradient(c, w, noise, stream);
      estimate[ci] = sum / draws_per_client;
    });

    Vector g = Vector::Zero(problem.dim());
    for (int c = 0; c < M; ++c) g += problem.client(c).weight() * estimate[c];

    record.pseudo_grad_norm.push_back(g.norm());
    w = w - lr * g;
    append_state(record, problem, w);
    guard.check(w, record.dist_sq.back(), t + 1);
  }
  record.pseudo_grad_norm.push_back(problem.global_gradient(w).norm());
  return record;
}

}  // namespace fedsim
