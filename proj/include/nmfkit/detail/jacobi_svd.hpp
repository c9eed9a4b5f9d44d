#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "nmfkit/matrix.hpp"

namespace nmfkit::detail {

/// Singular values (descending) by one-sided Jacobi rotations. Accurate to
/// roughly machine precision relative to the largest singular value, which
/// the Gram-matrix route cannot offer for small trailing values.
inline std::vector<double> singular_values(const RealMatrix& A, int max_sweeps = 60) {
  const bool wide = A.cols() > A.rows();
  const std::size_t m = wide ? A.cols() : A.rows();
  const std::size_t n = wide ? A.rows() : A.cols();

  std::vector<std::vector<double>> cols(n, std::vector<double>(m));
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      if (wide) cols[i][j] = A(i, j);
      else cols[j][i] = A(i, j);
    }

  constexpr double tol = 1e-15;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto& ap = cols[p];
        auto& aq = cols[q];
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += ap[k] * ap[k];
          beta += aq[k] * aq[k];
          gamma += ap[k] * aq[k];
        }
        if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double x = ap[k];
          const double y = aq[k];
          ap[k] = c * x - s * y;
          aq[k] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(squared_norm(cols[j]));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

}  // namespace nmfkit::detail
