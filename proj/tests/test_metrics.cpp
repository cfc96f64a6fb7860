#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fedsim/metrics.hpp"
#include "fedsim/synthgen.hpp"

using fedsim::bias_curves;
using fedsim::ClientObjective;
using fedsim::dissimilarity_bound_curve;
using fedsim::drift_at_optimum;
using fedsim::drift_at_optimum_closed_form;
using fedsim::FederatedProblem;
using fedsim::gradient_dissimilarity;
using fedsim::HeterogeneityReport;
using fedsim::Matrix;
using fedsim::Vector;

namespace {

Matrix scalar1x1(double a) { return a * Matrix::Identity(1, 1); }
Vector vec1(double v) { return v * Vector::Ones(1); }

// Curvatures 1 and 2 with opposite shifts: optimum at zero, client gradients
// there are -1 and +1, and two local steps at eta = 0.1 leave an averaged
// pseudo-gradient of exactly 0.025.
FederatedProblem mismatched_pair() {
  std::vector<ClientObjective> clients;
  clients.emplace_back(scalar1x1(1.0), vec1(1.0), vec1(0.0), 0.5);
  clients.emplace_back(scalar1x1(2.0), vec1(-1.0), vec1(0.0), 0.5);
  return FederatedProblem(std::move(clients));
}

FederatedProblem synthetic(std::uint64_t seed, int dim = 6, int clients = 10,
                           int samples = 40) {
  fedsim::SynthConfig cfg;
  cfg.dim = dim;
  cfg.num_clients = clients;
  cfg.samples_per_client = samples;
  cfg.seed = seed;
  cfg.attach_samples = false;
  return fedsim::generate(cfg);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("dissimilarity on the mismatched pair at the optimum") {
  const FederatedProblem p = mismatched_pair();
  // gradients -1 and +1, average 0: (1 + 1) / 2
  CHECK(gradient_dissimilarity(p, p.optimum()) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("drift on the mismatched pair has a hand value") {
  const FederatedProblem p = mismatched_pair();
  // per client: endpoints of two steps from 0; pseudo-gradients
  //   client 0 (grad -1 at 0): (1 + (1 - 0.1)) / 2 * (-1) = -0.95
  //   client 1 (grad +1 at 0): (1 + (1 - 0.2)) / 2 * (+1) = +0.90
  // average: -0.025
  CHECK(drift_at_optimum(p, 0.1, 2) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(drift_at_optimum_closed_form(p, 0.1, 2) ==
        doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("trajectory and polynomial drift routes agree on synthetic data") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const FederatedProblem p = synthetic(seed);
    const double eta = 0.5 / p.smoothness();
    for (int H : {1, 2, 3, 8, 17}) {
      const double a = drift_at_optimum(p, eta, H);
      const double b = drift_at_optimum_closed_form(p, eta, H);
      CHECK(std::abs(a - b) <= 1e-10 * (1.0 + a));
    }
  }
}

TEST_CASE("a single local step never drifts") {
  const FederatedProblem p = synthetic(4);
  CHECK(drift_at_optimum(p, 0.5 / p.smoothness(), 1) <= 1e-12);
}

TEST_CASE("identical clients never drift") {
  std::vector<ClientObjective> clients;
  for (int c = 0; c < 6; ++c) {
    clients.emplace_back(scalar1x1(1.5), vec1(0.7), vec1(0.2), 1.0 / 6);
  }
  const FederatedProblem p(std::move(clients));
  CHECK(drift_at_optimum(p, 0.3, 9) <= 1e-12);
  CHECK(gradient_dissimilarity(p, p.optimum()) == 0.0);
}

TEST_CASE("a shared curvature kills drift even with conflicting shifts") {
  const Matrix a = 2.0 * Matrix::Identity(3, 3);
  Vector b0(3), b1(3);
  b0 << 1.0, -2.0, 0.5;
  b1 = -b0;
  std::vector<ClientObjective> clients;
  clients.emplace_back(a, b0, Vector::Zero(3), 0.5);
  clients.emplace_back(a, b1, Vector::Zero(3), 0.5);
  const FederatedProblem p(std::move(clients));
  CHECK(drift_at_optimum(p, 0.2, 12) <= 1e-12);
  CHECK(gradient_dissimilarity(p, p.optimum()) > 1.0);
}

TEST_CASE("single-client problems cannot drift") {
  std::vector<ClientObjective> clients;
  clients.emplace_back(scalar1x1(2.0), vec1(3.0), vec1(1.0), 1.0);
  const FederatedProblem p(std::move(clients));
  CHECK(drift_at_optimum(p, 0.25, 20) <= 1e-13);
}

TEST_CASE("quadratic cap curve plugs in") {
  // beta |grad|^2 + gamma eta^2 L^2 H^2 zeta^2
  CHECK(dissimilarity_bound_curve(1.0, 0.1, 10, 1.0, 0.0, 0.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dissimilarity_bound_curve(2.0, 0.05, 4, 3.0, 5.0, 0.5, 1.0) ==
        doctest::Approx(0.5 * 5.0 + 0.05 * 0.05 * 4.0 * 16.0 * 3.0)
            .epsilon(1e-14));
  CHECK(dissimilarity_bound_curve(1.0, 0.1, 7, 0.0, 0.0, 0.5, 1.0) == 0.0);
  // with beta = 0 the curve is exactly quadratic in H
  const double h1 = dissimilarity_bound_curve(1.0, 0.1, 3, 2.0, 9.0, 0.0, 1.0);
  const double h2 = dissimilarity_bound_curve(1.0, 0.1, 6, 2.0, 9.0, 0.0, 1.0);
  CHECK(h2 == doctest::Approx(4.0 * h1).epsilon(1e-14));
}

TEST_CASE("bias curves at the optimum honor the mean-square ordering") {
  const FederatedProblem p = synthetic(5, 8, 16, 60);
  const double eta = 0.4 / p.smoothness();
  const std::vector<int> hs = {1, 2, 4, 8, 16, 32};
  const HeterogeneityReport r = bias_curves(p, p.optimum(), eta, hs);

  REQUIRE(r.H_values == hs);
  REQUIRE(r.squared_mean_bias.size() == hs.size());
  CHECK(r.eta == eta);
  CHECK(r.grad_dissimilarity ==
        doctest::Approx(gradient_dissimilarity(p, p.optimum())).epsilon(1e-12));

  for (std::size_t k = 0; k < hs.size(); ++k) {
    // |avg bias|^2 <= avg |bias|^2 for any distribution
    CHECK(r.squared_mean_bias[k] <=
          r.mean_square_bias[k] * (1.0 + 1e-12) + 1e-18);
    // at the optimum the mean bias IS the drift (average gradient is zero)
    CHECK(std::sqrt(r.squared_mean_bias[k]) ==
          doctest::Approx(r.drift_at_optimum[k]).epsilon(1e-9));
    // the quadratic cap actually caps
    CHECK(r.mean_square_bias[k] <= r.quadratic_bound[k] * (1.0 + 1e-12));
  }

  // one local step means zero bias of either kind
  CHECK(r.squared_mean_bias[0] <= 1e-20);
  CHECK(r.mean_square_bias[0] <= 1e-20);
  CHECK(r.drift_at_optimum[0] <= 1e-10);
}

TEST_CASE("bias curves accept unsorted step lists") {
  const FederatedProblem p = synthetic(6);
  const double eta = 0.3 / p.smoothness();
  const HeterogeneityReport a = bias_curves(p, p.optimum(), eta, {8, 2, 4});
  const HeterogeneityReport b = bias_curves(p, p.optimum(), eta, {2, 4, 8});
  CHECK(a.H_values == std::vector<int>{8, 2, 4});
  CHECK(a.mean_square_bias[0] == b.mean_square_bias[2]);
  CHECK(a.mean_square_bias[1] == b.mean_square_bias[0]);
  CHECK(a.drift_at_optimum[2] == b.drift_at_optimum[1]);
}

TEST_CASE("bias curves away from the optimum keep drift anchored there") {
  const FederatedProblem p = synthetic(7);
  const double eta = 0.3 / p.smoothness();
  const Vector w = p.optimum() + Vector::Constant(p.dim(), 0.5);
  const HeterogeneityReport at_w = bias_curves(p, w, eta, {4});
  const HeterogeneityReport at_opt = bias_curves(p, p.optimum(), eta, {4});
  CHECK(at_w.drift_at_optimum[0] == at_opt.drift_at_optimum[0]);
  CHECK(at_w.grad_dissimilarity != at_opt.grad_dissimilarity);
  CHECK(at_w.mean_square_bias[0] > at_opt.mean_square_bias[0]);
}

TEST_CASE("scaling study slopes point down") {
  fedsim::SynthConfig base;
  base.dim = 5;
  base.nu_max = 5.0;
  base.eps_var = 0.09;
  base.attach_samples = false;
  const std::vector<std::pair<int, int>> grid = {
      {20, 10}, {80, 10}, {20, 40}, {80, 40}};
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6};
  const auto table =
      fedsim::drift_scaling_experiment(grid, seeds, base, 0.01, 4);

  REQUIRE(table.rows.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(table.rows[i].samples_per_client == grid[i].first);
    CHECK(table.rows[i].num_clients == grid[i].second);
    CHECK(table.rows[i].mean_drift > 0.0);
    REQUIRE(table.rows[i].drift_by_seed.size() == seeds.size());
    double mean = 0.0;
    for (double v : table.rows[i].drift_by_seed) mean += v;
    mean /= static_cast<double>(seeds.size());
    CHECK(table.rows[i].mean_drift == doctest::Approx(mean).epsilon(1e-12));
  }
  CHECK(table.drift_slope < 0.0);
  CHECK(table.dissimilarity_slope < 0.0);
}

TEST_CASE("scaling study wants five seeds and a grid") {
  fedsim::SynthConfig base;
  base.dim = 4;
  CHECK_THROWS_AS(
      fedsim::drift_scaling_experiment({}, {1, 2, 3, 4, 5}, base, 0.01, 2),
      std::invalid_argument);
  CHECK_THROWS_AS(
      fedsim::drift_scaling_experiment({{10, 5}}, {1, 2}, base, 0.01, 2),
      std::invalid_argument);
}

}  // TEST_SUITE
