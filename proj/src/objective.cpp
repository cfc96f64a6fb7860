#include "fedsim/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "fedsim/errors.hpp"

namespace fedsim {

NoiseModel NoiseModel::additive_gaussian(double sigma_sq) {
  if (!(sigma_sq >= 0.0))
    throw std::invalid_argument("noise variance must be >= 0");
  NoiseModel m;
  m.kind = Kind::kAdditiveGaussian;
  m.sigma_sq = sigma_sq;
  return m;
}

NoiseModel NoiseModel::minibatch(int batch_size) {
  if (batch_size < 1)
    throw std::invalid_argument("batch size must be >= 1");
  NoiseModel m;
  m.kind = Kind::kMinibatch;
  m.batch_size = batch_size;
  return m;
}

namespace {

// Solve sym * u = rhs for a positive-definite sym, then polish the result
// with two rounds of iterative refinement so downstream gradient-at-optimum
// checks hold with margin at 1e-10.
Vector refined_solve(const Matrix& sym, const Eigen::LDLT<Matrix>& factor,
                     const Vector& rhs) {
  Vector u = factor.solve(rhs);
  for (int pass = 0; pass < 2; ++pass) {
    Vector residual = rhs - sym * u;
    u += factor.solve(residual);
  }
  return u;
}

}  // namespace

ClientObjective::ClientObjective(Matrix curvature, Vector shift,
                                 Vector reference_point, double weight)
    : curvature_(std::move(curvature)),
      shift_(std::move(shift)),
      reference_point_(std::move(reference_point)),
      weight_(weight) {
  const Eigen::Index d = reference_point_.size();
  if (d < 1) throw std::invalid_argument("client dimension must be >= 1");
  if (curvature_.rows() != d || curvature_.cols() != d)
    throw std::invalid_argument("curvature matrix shape does not match dim");
  if (shift_.size() != d)
    throw std::invalid_argument("shift vector size does not match dim");
  if (!(weight_ > 0.0) || weight_ > 1.0 + 1e-12)
    throw std::invalid_argument("client weight must lie in (0, 1]");

  const double scale = curvature_.cwiseAbs().maxCoeff();
  const double asym =
      (curvature_ - curvature_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1.0))
    throw std::invalid_argument("curvature matrix is not symmetric");
  Matrix sym = 0.5 * (curvature_ + curvature_.transpose());
  curvature_ = std::move(sym);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(curvature_,
                                            Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw NumericalError("client curvature eigendecomposition failed");
  eigen_min_ = eig.eigenvalues().minCoeff();
  eigen_max_ = eig.eigenvalues().maxCoeff();
  if (!(eigen_min_ > 0.0))
    throw SingularMatrixError(
        "client curvature must be positive definite (smallest eigenvalue " +
        std::to_string(eigen_min_) + ")");

  Eigen::LDLT<Matrix> factor(curvature_);
  local_minimizer_ = reference_point_ + refined_solve(curvature_, factor, shift_);
  if (gradient(local_minimizer_).norm() > 1e-10)
    throw NumericalError("local minimizer solve left a gradient above 1e-10");
}

double ClientObjective::loss(const Vector& w) const {
  const Vector delta = w - reference_point_;
  return 0.5 * delta.dot(curvature_ * delta) - shift_.dot(delta);
}

Vector ClientObjective::gradient(const Vector& w) const {
  return curvature_ * (w - reference_point_) - shift_;
}

void ClientObjective::attach_samples(Matrix inputs, Vector labels) {
  if (inputs.rows() < 1)
    throw std::invalid_argument("need at least one sample");
  if (inputs.cols() != dim())
    throw std::invalid_argument("sample width does not match dim");
  if (labels.size() != inputs.rows())
    throw std::invalid_argument("label count does not match sample count");
  samples_ = Samples{std::move(inputs), std::move(labels)};
}

const Matrix& ClientObjective::sample_inputs() const {
  if (!samples_) throw std::logic_error("no samples attached");
  return samples_->inputs;
}

const Vector& ClientObjective::sample_labels() const {
  if (!samples_) throw std::logic_error("no samples attached");
  return samples_->labels;
}

std::pair<double, double> smoothness_constants(
    const std::vector<ClientObjective>& clients) {
  if (clients.empty())
    throw std::invalid_argument("smoothness_constants: no clients");
  double mu = clients.front().eigen_min();
  double L = clients.front().eigen_max();
  for (const auto& c : clients) {
    mu = std::min(mu, c.eigen_min());
    L = std::max(L, c.eigen_max());
  }
  return {mu, L};
}

Vector solve_global_minimizer(const std::vector<ClientObjective>& clients) {
  if (clients.empty())
    throw std::invalid_argument("solve_global_minimizer: no clients");
  const int d = clients.front().dim();
  for (const auto& c : clients)
    if (c.dim() != d)
      throw std::invalid_argument("clients disagree on dimension");

  bool shared_reference = true;
  for (const auto& c : clients)
    if (c.reference_point() != clients.front().reference_point()) {
      shared_reference = false;
      break;
    }

  // Solve in correction form around the mean reference point: with a shared
  // reference and zero shifts this keeps the optimum bitwise equal to it.
  Vector mean_ref;
  if (shared_reference) {
    mean_ref = clients.front().reference_point();
  } else {
    mean_ref = Vector::Zero(d);
    for (const auto& c : clients)
      mean_ref += c.weight() * c.reference_point();
  }

  Matrix avg_curv = Matrix::Zero(d, d);
  Vector rhs = Vector::Zero(d);
  for (const auto& c : clients) {
    avg_curv += c.weight() * c.curvature();
    rhs += c.weight() *
           (c.curvature() * (c.reference_point() - mean_ref) + c.shift());
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(avg_curv, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success)
    throw NumericalError("average curvature eigendecomposition failed");
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw SingularMatrixError(
        "average curvature is singular or too ill-conditioned to solve "
        "(eigenvalue range [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "])");

  Eigen::LDLT<Matrix> factor(avg_curv);
  return mean_ref + refined_solve(avg_curv, factor, rhs);
}

FederatedProblem::FederatedProblem(std::vector<ClientObjective> clients)
    : clients_(std::move(clients)) {
  if (clients_.empty())
    throw std::invalid_argument("federated problem needs at least one client");
  const int d = clients_.front().dim();
  double weight_sum = 0.0;
  for (const auto& c : clients_) {
    if (c.dim() != d)
      throw std::invalid_argument("clients disagree on dimension");
    weight_sum += c.weight();
  }
  if (std::abs(weight_sum - 1.0) > 1e-12)
    throw std::invalid_argument("client weights must sum to 1 (got " +
                                std::to_string(weight_sum) + ")");

  std::tie(strong_convexity_, smoothness_) = smoothness_constants(clients_);

  average_curvature_ = Matrix::Zero(d, d);
  for (const auto& c : clients_)
    average_curvature_ += c.weight() * c.curvature();

  optimum_ = solve_global_minimizer(clients_);
  if (global_gradient(optimum_).norm() > 1e-10)
    throw NumericalError("global gradient at the solved optimum exceeds 1e-10");
  optimum_loss_ = global_loss(optimum_);
}

double FederatedProblem::local_loss(int c, const Vector& w) const {
  return clients_.at(c).loss(w);
}

Vector FederatedProblem::local_gradient(int c, const Vector& w) const {
  return clients_.at(c).gradient(w);
}

double FederatedProblem::global_loss(const Vector& w) const {
  double total = 0.0;
  for (const auto& c : clients_) total += c.weight() * c.loss(w);
  return total;
}

Vector FederatedProblem::global_gradient(const Vector& w) const {
  Vector g = Vector::Zero(dim());
  for (const auto& c : clients_) g += c.weight() * c.gradient(w);
  return g;
}

double FederatedProblem::global_loss_gap(const Vector& w) const {
  return global_loss(w) - optimum_loss_;
}

Vector FederatedProblem::stochastic_gradient(int c, const Vector& w,
                                             const NoiseModel& noise,
                                             rng::Stream& stream) const {
  const ClientObjective& client = clients_.at(c);
  switch (noise.kind) {
    case NoiseModel::Kind::kNone:
      return client.gradient(w);
    case NoiseModel::Kind::kAdditiveGaussian: {
      Vector g = client.gradient(w);
      if (noise.sigma_sq > 0.0) {
        const double per_coord = std::sqrt(noise.sigma_sq / dim());
        for (Eigen::Index j = 0; j < g.size(); ++j)
          g[j] += per_coord * stream.normal();
      }
      return g;
    }
    case NoiseModel::Kind::kMinibatch: {
      if (!client.has_samples())
        throw std::invalid_argument(
            "minibatch gradients need raw samples attached to client " +
            std::to_string(c));
      const Matrix& X = client.sample_inputs();
      const Vector& y = client.sample_labels();
      const auto n = static_cast<std::uint64_t>(X.rows());
      if (static_cast<std::uint64_t>(noise.batch_size) >= n)
        return client.gradient(w);
      Vector g = Vector::Zero(dim());
      for (int b = 0; b < noise.batch_size; ++b) {
        const auto i = static_cast<Eigen::Index>(stream.uniform_below(n));
        g += X.row(i).transpose() * (X.row(i).dot(w) - y[i]);
      }
      return g / noise.batch_size;
    }
  }
  throw std::logic_error("unreachable noise kind");
}

}  // namespace fedsim
