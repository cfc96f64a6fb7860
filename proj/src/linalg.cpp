#include "fedsim/linalg.hpp"

#include <stdexcept>

namespace fedsim {

Matrix matrix_power(const Matrix& base, int exponent) {
  if (base.rows() != base.cols())
    throw std::invalid_argument("matrix_power: base must be square");
  if (exponent < 0)
    throw std::invalid_argument("matrix_power: exponent must be >= 0");
  Matrix result = Matrix::Identity(base.rows(), base.cols());
  Matrix square = base;
  int e = exponent;
  while (e > 0) {
    if (e & 1) result = result * square;
    e >>= 1;
    if (e > 0) square = square * square;
  }
  return result;
}

Matrix sym_matrix_power(const Matrix& sym_base, int exponent) {
  if (sym_base.rows() != sym_base.cols())
    throw std::invalid_argument("sym_matrix_power: base must be square");
  if (exponent < 0)
    throw std::invalid_argument("sym_matrix_power: exponent must be >= 0");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym_base);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("sym_matrix_power: eigendecomposition failed");
  Vector powered = eig.eigenvalues();
  for (Eigen::Index i = 0; i < powered.size(); ++i)
    powered[i] = std::pow(powered[i], exponent);
  return eig.eigenvectors() * powered.asDiagonal() *
         eig.eigenvectors().transpose();
}

Matrix geometric_matrix_sum(const Matrix& base, int count) {
  if (base.rows() != base.cols())
    throw std::invalid_argument("geometric_matrix_sum: base must be square");
  if (count < 0)
    throw std::invalid_argument("geometric_matrix_sum: count must be >= 0");
  Matrix sum = Matrix::Zero(base.rows(), base.cols());
  Matrix term = Matrix::Identity(base.rows(), base.cols());
  for (int h = 0; h < count; ++h) {
    sum += term;
    if (h + 1 < count) term = term * base;
  }
  return sum;
}

double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("regression_slope: size mismatch");
  if (x.size() < 2)
    throw std::invalid_argument("regression_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mean_x) * (y[i] - mean_y);
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("regression_slope: x values are constant");
  return sxy / sxx;
}

}  // namespace fedsim
