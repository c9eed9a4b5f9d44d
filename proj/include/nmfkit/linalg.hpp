#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "nmfkit/error.hpp"
#include "nmfkit/matrix.hpp"

namespace nmfkit {

enum class ErrorMode { naive, gram };

namespace detail {

inline void check_factor_shapes(const RealMatrix& M, const FactorPair& F) {
  require(F.V.cols() == F.W.rows(), ErrorCode::shape_mismatch, "factor inner dimensions differ");
  require(F.V.rows() == M.rows() && F.W.cols() == M.cols(), ErrorCode::shape_mismatch,
          "factor outer dimensions do not match the target matrix");
}

/// sum of (V^T V) o (W W^T), i.e. ||VW||_F^2 without forming VW. O(max(m,n) r^2).
inline double product_squared_norm(const FactorPair& F) {
  const RealMatrix vtv = multiply_at_b(F.V, F.V);
  const RealMatrix wwt = multiply_a_bt(F.W, F.W);
  return inner(vtv, wwt);
}

/// <M, VW> touching only the nonzeros of M.
inline double target_product_inner(const RealMatrix& M, const FactorPair& F) {
  const RealMatrix wt = F.W.transposed();
  double s = 0.0;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    auto mrow = M.row(i);
    auto vrow = F.V.row(i);
    for (std::size_t j = 0; j < M.cols(); ++j) {
      if (mrow[j] == 0.0) continue;
      s += mrow[j] * dot(vrow, wt.row(j));
    }
  }
  return s;
}

}  // namespace detail

inline SignedSplit signed_split(const RealMatrix& M) {
  SignedSplit out{RealMatrix(M.rows(), M.cols()), RealMatrix(M.rows(), M.cols())};
  auto src = M.values();
  auto p = out.P.values();
  auto n = out.N.values();
  for (std::size_t k = 0; k < src.size(); ++k) {
    p[k] = std::max(0.0, src[k]);
    n[k] = std::max(0.0, -src[k]);
  }
  return out;
}

/// (M_+ + C, M_- + C) for a nonnegative offset C.
inline SignedSplit signed_split(const RealMatrix& M, const RealMatrix& offset) {
  detail::require(offset.rows() == M.rows() && offset.cols() == M.cols(),
                  ErrorCode::shape_mismatch, "offset shape differs from M");
  detail::require(is_nonnegative(offset), ErrorCode::invalid_argument, "offset has a negative entry");
  SignedSplit out = signed_split(M);
  auto c = offset.values();
  auto p = out.P.values();
  auto n = out.N.values();
  for (std::size_t k = 0; k < c.size(); ++k) {
    p[k] += c[k];
    n[k] += c[k];
  }
  return out;
}

/// ||M - VW||_F^2. The gram mode expands the square and never materializes VW.
inline double frobenius_error(const RealMatrix& M, const FactorPair& F,
                              ErrorMode mode = ErrorMode::gram) {
  detail::check_factor_shapes(M, F);
  if (mode == ErrorMode::naive) {
    return squared_norm(subtract(M, multiply(F.V, F.W)));
  }
  const double target = squared_norm(M);
  const double approx = detail::product_squared_norm(F);
  const double value = target - 2.0 * detail::target_product_inner(M, F) + approx;
  if (value >= 0.0) return value;
  // cancellation in the expansion; anything beyond roundoff is a bug
  const double slack = 1e-12 * std::max(1.0, target + approx);
  if (value >= -slack) return 0.0;
  throw Error(ErrorCode::internal_consistency, "gram-mode error is significantly negative");
}

/// The alpha minimizing ||M - alpha VW||_F.
inline double optimal_scale(const RealMatrix& M, const FactorPair& F) {
  detail::check_factor_shapes(M, F);
  const double denom = detail::product_squared_norm(F);
  if (!(denom > 0.0)) throw Error(ErrorCode::undefined_scale, "VW is zero");
  return detail::target_product_inner(M, F) / denom;
}

/// Gradients of ||M - VW||_F^2 with respect to V and W.
inline std::pair<RealMatrix, RealMatrix> gradient(const RealMatrix& M, const FactorPair& F) {
  detail::check_factor_shapes(M, F);
  // grad_V = 2 (V W W^T - M W^T), grad_W = 2 (V^T V W - V^T M)
  RealMatrix gv = subtract(multiply(F.V, multiply_a_bt(F.W, F.W)), multiply_a_bt(M, F.W));
  RealMatrix gw = subtract(multiply(multiply_at_b(F.V, F.V), F.W), multiply_at_b(F.V, M));
  scale_in_place(gv, 2.0);
  scale_in_place(gw, 2.0);
  return {std::move(gv), std::move(gw)};
}

/// Largest violation of the first-order conditions of min ||M - VW||_F^2 s.t. V, W >= lb:
/// X >= lb, grad >= 0 and (X - lb) o grad = 0, aggregated with the max-norm.
inline double kkt_residual(const RealMatrix& M, const FactorPair& F, double lb) {
  detail::require(lb >= 0.0, ErrorCode::invalid_argument, "lower bound must be nonnegative");
  const auto [gv, gw] = gradient(M, F);
  double worst = 0.0;
  auto accumulate = [&](const RealMatrix& X, const RealMatrix& G) {
    auto x = X.values();
    auto g = G.values();
    for (std::size_t k = 0; k < x.size(); ++k) {
      worst = std::max({worst, lb - x[k], -g[k], std::abs((x[k] - lb) * g[k])});
    }
  };
  accumulate(F.V, gv);
  accumulate(F.W, gw);
  return worst;
}

}  // namespace nmfkit
