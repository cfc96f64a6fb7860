#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fedsim {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// base^exponent for exponent >= 0, by binary exponentiation.
Matrix matrix_power(const Matrix& base, int exponent);

// Same power through the eigendecomposition of a symmetric base. Used as an
// independent cross-check of matrix_power; repeated multiplication is the
// primary route because it does not amplify eigenvector error.
Matrix sym_matrix_power(const Matrix& sym_base, int exponent);

// I + base + base^2 + ... + base^(count-1), caching the running power.
Matrix geometric_matrix_sum(const Matrix& base, int count);

// Least-squares slope of y against x. Sizes must match and be >= 2.
double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

}  // namespace fedsim
