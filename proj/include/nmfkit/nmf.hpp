#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "nmfkit/detail/jacobi_svd.hpp"
#include "nmfkit/error.hpp"
#include "nmfkit/linalg.hpp"
#include "nmfkit/matrix.hpp"
#include "nmfkit/random.hpp"

namespace nmfkit {

inline constexpr double default_epsilon = 1e-9;

namespace detail {

inline double multiplicative_entry(double x, double num, double den, double lb) {
  // zero is a fixed point of every multiplicative rule
  if (x == 0.0) return std::max(lb, 0.0);
  if (!(den > 0.0)) {
    throw Error(ErrorCode::positivity_violation, "zero denominator in multiplicative update");
  }
  return std::max(lb, x * (num / den));
}

/// V <- max(lb, V o [P W^T] / [V W W^T + N W^T]). `N` may be null (N = 0).
inline void multiplicative_update_v(const RealMatrix& P, const RealMatrix* N, FactorPair& F,
                                    double lb) {
  const RealMatrix num = multiply_a_bt(P, F.W);
  RealMatrix den = multiply(F.V, multiply_a_bt(F.W, F.W));
  if (N != nullptr) {
    const RealMatrix nwt = multiply_a_bt(*N, F.W);
    for (std::size_t k = 0; k < den.size(); ++k) den.values()[k] += nwt.values()[k];
  }
  auto v = F.V.values();
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = multiplicative_entry(v[k], num.values()[k], den.values()[k], lb);
}

/// W <- max(lb, W o [V^T P] / [V^T V W + V^T N]).
inline void multiplicative_update_w(const RealMatrix& P, const RealMatrix* N, FactorPair& F,
                                    double lb) {
  const RealMatrix num = multiply_at_b(F.V, P);
  RealMatrix den = multiply(multiply_at_b(F.V, F.V), F.W);
  if (N != nullptr) {
    const RealMatrix vtn = multiply_at_b(F.V, *N);
    for (std::size_t k = 0; k < den.size(); ++k) den.values()[k] += vtn.values()[k];
  }
  auto w = F.W.values();
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k] = multiplicative_entry(w[k], num.values()[k], den.values()[k], lb);
}

inline void require_nonnegative_target(const RealMatrix& M) {
  require(is_nonnegative(M), ErrorCode::nonnegativity_violation,
          "target matrix has a negative entry");
}

inline void require_epsilon(double eps) {
  require(eps > 0.0, ErrorCode::invalid_argument, "epsilon must be positive");
}

// HALS kernels. `mwt` = M W^T (m x r), `wwt` = W W^T (r x r); residual
// interactions R_k W_k^T are recovered as mwt_k - sum_{l != k} V_l wwt_lk.

inline void hals_v_column(RealMatrix& V, std::span<const double> mwt_col,
                          std::span<const double> wwt_col, std::size_t k, double lb) {
  const double norm = wwt_col[k];
  if (!(norm > 0.0)) throw Error(ErrorCode::degenerate_factor, "row of W has zero norm");
  for (std::size_t i = 0; i < V.rows(); ++i) {
    auto vrow = V.row(i);
    double s = mwt_col[i];
    for (std::size_t l = 0; l < V.cols(); ++l)
      if (l != k) s -= vrow[l] * wwt_col[l];
    vrow[k] = std::max(lb, s / norm);
  }
}

inline void hals_w_row(RealMatrix& W, std::span<const double> vtm_row,
                       std::span<const double> vtv_row, std::size_t k, double lb) {
  const double norm = vtv_row[k];
  if (!(norm > 0.0)) throw Error(ErrorCode::degenerate_factor, "column of V has zero norm");
  auto wk = W.row(k);
  std::vector<double> s(vtm_row.begin(), vtm_row.end());
  for (std::size_t l = 0; l < W.rows(); ++l) {
    if (l == k || vtv_row[l] == 0.0) continue;
    auto wl = W.row(l);
    for (std::size_t j = 0; j < W.cols(); ++j) s[j] -= vtv_row[l] * wl[j];
  }
  for (std::size_t j = 0; j < W.cols(); ++j) wk[j] = std::max(lb, s[j] / norm);
}

inline std::vector<std::size_t> default_order(std::size_t r) {
  std::vector<std::size_t> order(r);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

}  // namespace detail

/// Lee-Seung multiplicative update: V first, then W with the new V.
inline FactorPair mu_update(const RealMatrix& M, FactorPair F) {
  detail::check_factor_shapes(M, F);
  detail::require_nonnegative_target(M);
  detail::multiplicative_update_v(M, nullptr, F, 0.0);
  detail::multiplicative_update_w(M, nullptr, F, 0.0);
  return F;
}

/// Multiplicative update clamped at eps; limit points are stationary for
/// min ||M - VW||_F^2 s.t. V, W >= eps.
inline FactorPair mu_eps_update(const RealMatrix& M, FactorPair F, double eps) {
  detail::require_epsilon(eps);
  detail::check_factor_shapes(M, F);
  detail::require_nonnegative_target(M);
  detail::multiplicative_update_v(M, nullptr, F, eps);
  detail::multiplicative_update_w(M, nullptr, F, eps);
  F.lower_bound = eps;
  return F;
}

/// Exact minimization over column k of V (all else fixed), bounded below by eps.
inline void hals_update_v_column(const RealMatrix& M, FactorPair& F, std::size_t k, double eps) {
  detail::check_factor_shapes(M, F);
  detail::require(k < F.rank(), ErrorCode::invalid_argument, "component index out of range");
  std::vector<double> mwt(M.rows());
  auto wk = F.W.row(k);
  for (std::size_t i = 0; i < M.rows(); ++i) mwt[i] = dot(M.row(i), wk);
  std::vector<double> wwt(F.rank());
  for (std::size_t l = 0; l < F.rank(); ++l) wwt[l] = dot(F.W.row(l), wk);
  detail::hals_v_column(F.V, mwt, wwt, k, eps);
}

/// Exact minimization over row k of W (all else fixed), bounded below by eps.
inline void hals_update_w_row(const RealMatrix& M, FactorPair& F, std::size_t k, double eps) {
  detail::check_factor_shapes(M, F);
  detail::require(k < F.rank(), ErrorCode::invalid_argument, "component index out of range");
  std::vector<double> vtm(M.cols(), 0.0);
  std::vector<double> vtv(F.rank(), 0.0);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    const double vik = F.V(i, k);
    if (vik == 0.0) continue;
    auto mrow = M.row(i);
    for (std::size_t j = 0; j < M.cols(); ++j) vtm[j] += vik * mrow[j];
    auto vrow = F.V.row(i);
    for (std::size_t l = 0; l < F.rank(); ++l) vtv[l] += vik * vrow[l];
  }
  detail::hals_w_row(F.W, vtm, vtv, k, eps);
}

/// One HALS cycle: the columns of V in `order`, then the rows of W in `order`.
/// eps = 0 gives plain HALS; eps > 0 the safeguarded variant.
inline FactorPair hals_sweep(const RealMatrix& M, FactorPair F, double eps = 0.0,
                             std::span<const std::size_t> order = {}) {
  detail::check_factor_shapes(M, F);
  detail::require_nonnegative_target(M);
  detail::require(eps >= 0.0, ErrorCode::invalid_argument, "epsilon must be nonnegative");
  const std::vector<std::size_t> fallback = detail::default_order(F.rank());
  if (order.empty()) order = fallback;
  for (std::size_t k : order)
    detail::require(k < F.rank(), ErrorCode::invalid_argument, "order index out of range");

  {
    const RealMatrix mwt = multiply_a_bt(M, F.W);
    const RealMatrix wwt = multiply_a_bt(F.W, F.W);
    for (std::size_t k : order) detail::hals_v_column(F.V, mwt.column(k), wwt.column(k), k, eps);
  }
  {
    const RealMatrix vtm = multiply_at_b(F.V, M);
    const RealMatrix vtv = multiply_at_b(F.V, F.V);
    for (std::size_t k : order) detail::hals_w_row(F.W, vtm.row(k), vtv.row(k), k, eps);
  }
  F.lower_bound = eps;
  return F;
}

struct Rank1Pair {
  std::vector<double> v;
  std::vector<double> w;
  std::size_t iterations = 0;
};

class Rank1ConvergenceError : public Error {
 public:
  explicit Rank1ConvergenceError(Rank1Pair last)
      : Error(ErrorCode::convergence_failure, "power method exhausted its iteration budget"),
        last_(std::move(last)) {}

  const Rank1Pair& last_iterate() const noexcept { return last_; }

 private:
  Rank1Pair last_;
};

/// Best nonnegative rank-one approximation by alternating v = Mw/||w||^2,
/// w = v^T M/||v||^2 (the power method). Stops when w moves by less than
/// tol relative in max norm; the energy ||vw||_F^2 settles much earlier.
inline Rank1Pair rank1_power(const RealMatrix& M, double tol = 1e-13,
                             std::size_t max_iters = 10000, std::uint64_t seed = 0) {
  detail::require_nonnegative_target(M);
  detail::require(squared_norm(M) > 0.0, ErrorCode::invalid_argument, "M is zero");
  Rng rng(seed);
  Rank1Pair out;
  out.v.assign(M.rows(), 0.0);
  out.w.resize(M.cols());
  for (double& x : out.w) x = uniform_open_closed(rng);

  std::vector<double> previous;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    previous = out.w;
    const double ww = squared_norm(out.w);
    for (std::size_t i = 0; i < M.rows(); ++i) out.v[i] = dot(M.row(i), out.w) / ww;
    const double vv = squared_norm(out.v);
    if (!(vv > 0.0)) throw Error(ErrorCode::degenerate_factor, "power iterate vanished");
    std::fill(out.w.begin(), out.w.end(), 0.0);
    for (std::size_t i = 0; i < M.rows(); ++i) {
      const double vi = out.v[i] / vv;
      auto mrow = M.row(i);
      for (std::size_t j = 0; j < M.cols(); ++j) out.w[j] += vi * mrow[j];
    }
    out.iterations = it;
    double moved = 0.0, size = 0.0;
    for (std::size_t j = 0; j < out.w.size(); ++j) {
      moved = std::max(moved, std::abs(out.w[j] - previous[j]));
      size = std::max(size, std::abs(out.w[j]));
    }
    if (moved <= tol * size) return out;
  }
  throw Rank1ConvergenceError(std::move(out));
}

/// Exact rank-two NMF: V holds the two columns of M spanning the widest
/// angle, W the nonnegative coordinates of every column in that basis.
/// A rank-one input yields V = [m_a, 0]. Zero columns get zero coordinates.
inline FactorPair exact_rank2(const RealMatrix& M, double rank_tol = 1e-8) {
  detail::require_nonnegative_target(M);
  const std::size_t m = M.rows();
  const std::size_t n = M.cols();

  std::vector<std::size_t> nonzero;
  std::vector<double> norms(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) norms[j] += M(i, j) * M(i, j);
    norms[j] = std::sqrt(norms[j]);
    if (norms[j] > 0.0) nonzero.push_back(j);
  }
  FactorPair out{RealMatrix(m, 2), RealMatrix(2, n), 0.0};
  if (nonzero.empty()) return out;

  RealMatrix normalized(m, nonzero.size());
  for (std::size_t c = 0; c < nonzero.size(); ++c)
    for (std::size_t i = 0; i < m; ++i) normalized(i, c) = M(i, nonzero[c]) / norms[nonzero[c]];
  const std::vector<double> sigma = detail::singular_values(normalized);
  if (sigma.size() > 2 && sigma[2] > rank_tol * sigma[0]) {
    throw Error(ErrorCode::not_rank2, "third singular value exceeds the rank tolerance");
  }
  const bool rank_one = sigma.size() < 2 || sigma[1] <= rank_tol * sigma[0];

  std::size_t a = nonzero.front();
  std::size_t b = nonzero.front();
  if (!rank_one) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < nonzero.size(); ++p)
      for (std::size_t q = p + 1; q < nonzero.size(); ++q) {
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) c += normalized(i, p) * normalized(i, q);
        if (c < best) {
          best = c;
          a = nonzero[p];
          b = nonzero[q];
        }
      }
  }

  for (std::size_t i = 0; i < m; ++i) out.V(i, 0) = M(i, a);
  if (rank_one) {
    const double aa = norms[a] * norms[a];
    for (std::size_t j : nonzero) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += M(i, j) * M(i, a);
      out.W(0, j) = std::max(0.0, s / aa);
    }
    return out;
  }

  for (std::size_t i = 0; i < m; ++i) out.V(i, 1) = M(i, b);
  // 2x2 normal equations per column
  double g00 = 0.0, g01 = 0.0, g11 = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    g00 += out.V(i, 0) * out.V(i, 0);
    g01 += out.V(i, 0) * out.V(i, 1);
    g11 += out.V(i, 1) * out.V(i, 1);
  }
  const double det = g00 * g11 - g01 * g01;
  for (std::size_t j : nonzero) {
    double r0 = 0.0, r1 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r0 += out.V(i, 0) * M(i, j);
      r1 += out.V(i, 1) * M(i, j);
    }
    out.W(0, j) = std::max(0.0, (g11 * r0 - g01 * r1) / det);
    out.W(1, j) = std::max(0.0, (g00 * r1 - g01 * r0) / det);
  }
  return out;
}

}  // namespace nmfkit
