#pragma once

// Shared pieces of the multiplicative update rules.

#include "ideofactor/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace ideofactor::detail {

/// Splits a mixed-sign multiplier into non-negative parts with
/// lambda = plus - minus.
struct SignSplit {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
};

inline SignSplit split_sign(const Eigen::MatrixXd& lambda) {
  return {lambda.cwiseMax(0.0), (-lambda).cwiseMax(0.0)};
}

/// factor o sqrt(max(num, 0) / max(den, eps)).
inline Eigen::MatrixXd multiplicative_step(const Eigen::MatrixXd& factor, const Eigen::MatrixXd& num,
                                           const Eigen::MatrixXd& den, double eps) {
  return factor.cwiseProduct(num.cwiseMax(0.0).cwiseQuotient(den.cwiseMax(eps)).cwiseSqrt());
}

inline void require_finite(const Eigen::MatrixXd& x, const char* name) {
  if (!x.allFinite()) throw NumericError(std::string("non-finite entries in updated ") + name);
}

/// Matrix of i.i.d. Uniform[0,1) draws, filled row-major.
template <class Rng>
Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = rng.uniform();
  return x;
}

inline double relative_change(double previous, double current, double eps) {
  return std::abs(current - previous) / std::max(previous, eps);
}

}  // namespace ideofactor::detail
