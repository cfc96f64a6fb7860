#include "fedsim/synthgen.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "fedsim/errors.hpp"
#include "fedsim/parallel.hpp"

namespace fedsim {

void SynthConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (num_clients < 1) throw std::invalid_argument("num_clients must be >= 1");
  if (samples_per_client < 1)
    throw std::invalid_argument("samples_per_client must be >= 1");
  if (!(nu_max > 0.0)) throw std::invalid_argument("nu_max must be > 0");
  if (!(eps_var >= 0.0)) throw std::invalid_argument("eps_var must be >= 0");
}

namespace {

// Retries re-key every draw through the attempt number packed into the high
// bits of the client index, so a redraw never reuses rejected bits.
ClientObjective draw_client(const SynthConfig& cfg, const Vector& w_ref,
                            int client) {
  const int d = cfg.dim;
  const int n = cfg.samples_per_client;
  const double weight = 1.0 / cfg.num_clients;
  const double noise_sd = std::sqrt(cfg.eps_var);

  for (int attempt = 0; attempt < 3; ++attempt) {
    const std::uint64_t who = static_cast<std::uint64_t>(client) |
                              (static_cast<std::uint64_t>(attempt) << 40);
    const double nu =
        cfg.nu_max * rng::keyed_uniform01(cfg.seed, rng::Tag::kInputScale,
                                          who, 0, 0);
    Matrix inputs(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j)
        inputs(i, j) =
            nu * rng::keyed_uniform01(cfg.seed, rng::Tag::kInputs, who, i, j);
    Vector noise(n);
    for (int i = 0; i < n; ++i)
      noise[i] =
          noise_sd * rng::keyed_normal(cfg.seed, rng::Tag::kLabelNoise, who, i, 0);

    Matrix curvature = (inputs.transpose() * inputs) / n;
    Vector shift = (inputs.transpose() * noise) / n;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(curvature,
                                              Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success ||
        eig.eigenvalues().minCoeff() <= 1e-12 * eig.eigenvalues().maxCoeff())
      continue;  // numerically singular draw; try fresh bits

    ClientObjective obj(std::move(curvature), std::move(shift), w_ref, weight);
    if (cfg.attach_samples) {
      Vector labels = inputs * w_ref + noise;
      obj.attach_samples(std::move(inputs), std::move(labels));
    }
    return obj;
  }
  throw SingularMatrixError("client " + std::to_string(client) +
                            ": curvature stayed singular after 3 attempts");
}

}  // namespace

FederatedProblem generate(const SynthConfig& config) {
  config.validate();

  Vector w_ref(config.dim);
  for (int j = 0; j < config.dim; ++j)
    w_ref[j] =
        rng::keyed_normal(config.seed, rng::Tag::kReferenceOptimum, j, 0, 0);

  std::vector<std::optional<ClientObjective>> slots(config.num_clients);
  parallel_for(config.num_clients, [&](std::size_t c) {
    slots[c] = draw_client(config, w_ref, static_cast<int>(c));
  });

  std::vector<ClientObjective> clients;
  clients.reserve(config.num_clients);
  for (auto& slot : slots) clients.push_back(std::move(*slot));
  return FederatedProblem(std::move(clients));
}

}  // namespace fedsim
