#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fedsim/linalg.hpp"
#include "fedsim/rng.hpp"

namespace fedsim {

// How a stochastic local gradient is produced.
//  - kNone: the exact gradient.
//  - kAdditiveGaussian: exact gradient plus isotropic Gaussian noise whose
//    TOTAL variance across coordinates is sigma_sq per call.
//  - kMinibatch: average per-sample gradient over batch_size draws with
//    replacement from the client's raw samples. batch_size at or above the
//    sample count short-circuits to the exact gradient.
struct NoiseModel {
  enum class Kind { kNone, kAdditiveGaussian, kMinibatch };

  Kind kind = Kind::kNone;
  double sigma_sq = 0.0;
  int batch_size = 1;

  static NoiseModel none() { return {}; }
  static NoiseModel additive_gaussian(double sigma_sq);
  static NoiseModel minibatch(int batch_size);
};

// One client's loss
//   F_c(w) = 1/2 (w - w_ref)' A (w - w_ref) - b' (w - w_ref),
// so grad F_c(w) = A (w - w_ref) - b and the minimizer is w_ref + A^{-1} b.
// A must be symmetric (1e-12 relative) and positive definite; construction
// symmetrizes it, caches the eigenvalue range and the local minimizer, and
// verifies the gradient at the minimizer vanishes to 1e-10.
class ClientObjective {
 public:
  ClientObjective(Matrix curvature, Vector shift, Vector reference_point,
                  double weight);

  int dim() const { return static_cast<int>(reference_point_.size()); }
  const Matrix& curvature() const { return curvature_; }
  const Vector& shift() const { return shift_; }
  const Vector& reference_point() const { return reference_point_; }
  double weight() const { return weight_; }
  double eigen_min() const { return eigen_min_; }
  double eigen_max() const { return eigen_max_; }
  const Vector& local_minimizer() const { return local_minimizer_; }

  double loss(const Vector& w) const;
  Vector gradient(const Vector& w) const;
  const Matrix& hessian() const { return curvature_; }

  // Raw regression samples (inputs row-per-sample, labels); required only
  // for minibatch gradients. Consistency with (A, b) is the caller's job.
  void attach_samples(Matrix inputs, Vector labels);
  bool has_samples() const { return samples_.has_value(); }
  const Matrix& sample_inputs() const;
  const Vector& sample_labels() const;

 private:
  Matrix curvature_;
  Vector shift_;
  Vector reference_point_;
  double weight_;
  double eigen_min_ = 0.0;
  double eigen_max_ = 0.0;
  Vector local_minimizer_;

  struct Samples {
    Matrix inputs;
    Vector labels;
  };
  std::optional<Samples> samples_;
};

// A weighted collection of client objectives over a shared parameter space.
// Weights must sum to one (1e-12); the global minimizer, curvature range and
// average Hessian are computed at construction.
class FederatedProblem {
 public:
  explicit FederatedProblem(std::vector<ClientObjective> clients);

  int dim() const { return clients_.front().dim(); }
  int num_clients() const { return static_cast<int>(clients_.size()); }
  const ClientObjective& client(int c) const { return clients_.at(c); }
  const std::vector<ClientObjective>& clients() const { return clients_; }

  double strong_convexity() const { return strong_convexity_; }   // min over clients
  double smoothness() const { return smoothness_; }               // max over clients
  double condition_number() const { return smoothness_ / strong_convexity_; }
  const Matrix& average_curvature() const { return average_curvature_; }
  const Vector& optimum() const { return optimum_; }

  double local_loss(int c, const Vector& w) const;
  Vector local_gradient(int c, const Vector& w) const;
  double global_loss(const Vector& w) const;
  Vector global_gradient(const Vector& w) const;
  double global_loss_gap(const Vector& w) const;  // F(w) - F(optimum)

  // One stochastic gradient for client c under the given noise model.
  Vector stochastic_gradient(int c, const Vector& w, const NoiseModel& noise,
                             rng::Stream& stream) const;

 private:
  std::vector<ClientObjective> clients_;
  double strong_convexity_;
  double smoothness_;
  Matrix average_curvature_;
  Vector optimum_;
  double optimum_loss_;
};

// (min over clients of the smallest Hessian eigenvalue,
//  max over clients of the largest); the global mu and L.
std::pair<double, double> smoothness_constants(
    const std::vector<ClientObjective>& clients);

// Minimizer of the weighted average loss: solves the averaged normal
// equations with one step of iterative refinement. Throws
// SingularMatrixError when the average curvature has a non-positive
// eigenvalue or condition number above 1e12.
Vector solve_global_minimizer(const std::vector<ClientObjective>& clients);

}  // namespace fedsim
