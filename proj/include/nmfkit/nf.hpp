#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "nmfkit/error.hpp"
#include "nmfkit/linalg.hpp"
#include "nmfkit/matrix.hpp"
#include "nmfkit/nmf.hpp"

namespace nmfkit {

/// Per-component update family for one cycle over the columns of V and rows of W.
enum class FactorwiseRule {
  mu_column,  // Lee-Seung restricted to a single column/row
  nf_r1,      // rank-one NF update on the sign split of the residual R_k
  hals_opt,   // closed-form optimum
};

inline std::string_view to_string(FactorwiseRule rule) {
  switch (rule) {
    case FactorwiseRule::mu_column: return "mu_column";
    case FactorwiseRule::nf_r1: return "nf_r1";
    case FactorwiseRule::hals_opt: return "hals_opt";
  }
  return "unknown";
}

enum class Side { V, W };

namespace detail {

inline void check_split(const SignedSplit& split) {
  require(split.P.rows() == split.N.rows() && split.P.cols() == split.N.cols(),
          ErrorCode::shape_mismatch, "P and N shapes differ");
  require(is_nonnegative(split.P) && is_nonnegative(split.N), ErrorCode::nonnegativity_violation,
          "split parts must be nonnegative");
}

inline RealMatrix split_target(const SignedSplit& split) { return subtract(split.P, split.N); }

}  // namespace detail

/// Multiplicative update for an arbitrary-sign M = P - N:
/// V <- V o [P W^T] / [V W W^T + N W^T], then W with the new V.
inline FactorPair nf_mu_update(const SignedSplit& split, FactorPair F) {
  detail::check_split(split);
  detail::check_factor_shapes(split.P, F);
  detail::multiplicative_update_v(split.P, &split.N, F, 0.0);
  detail::multiplicative_update_w(split.P, &split.N, F, 0.0);
  return F;
}

inline FactorPair nf_mu_eps_update(const SignedSplit& split, FactorPair F, double eps) {
  detail::require_epsilon(eps);
  detail::check_split(split);
  detail::check_factor_shapes(split.P, F);
  detail::multiplicative_update_v(split.P, &split.N, F, eps);
  detail::multiplicative_update_w(split.P, &split.N, F, eps);
  F.lower_bound = eps;
  return F;
}

/// Rank-one multiplicative update of one side of (v, w) against M = P - N.
/// side V: v o [P w] / [v ||w||^2 + N w]; side W: w o [P^T v] / [||v||^2 w + N^T v].
inline std::vector<double> rank1_nf_update(const SignedSplit& split, std::span<const double> v,
                                           std::span<const double> w, Side side) {
  detail::check_split(split);
  detail::require(v.size() == split.P.rows() && w.size() == split.P.cols(),
                  ErrorCode::shape_mismatch, "vector lengths do not match the split");
  const RealMatrix& P = split.P;
  const RealMatrix& N = split.N;
  if (side == Side::V) {
    const double ww = squared_norm(w);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[i] = detail::multiplicative_entry(v[i], dot(P.row(i), w), v[i] * ww + dot(N.row(i), w),
                                            0.0);
    }
    return out;
  }
  const double vv = squared_norm(v);
  std::vector<double> num(w.size(), 0.0);
  std::vector<double> neg(w.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    auto prow = P.row(i);
    auto nrow = N.row(i);
    for (std::size_t j = 0; j < w.size(); ++j) {
      num[j] += v[i] * prow[j];
      neg[j] += v[i] * nrow[j];
    }
  }
  std::vector<double> out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    out[j] = detail::multiplicative_entry(w[j], num[j], vv * w[j] + neg[j], 0.0);
  return out;
}

namespace detail {

/// residual R_k = E + V_k W_k, where E = M - VW
inline RealMatrix component_residual(const RealMatrix& E, const FactorPair& F, std::size_t k) {
  RealMatrix R = E;
  for (std::size_t i = 0; i < R.rows(); ++i) {
    const double vik = F.V(i, k);
    if (vik == 0.0) continue;
    auto rrow = R.row(i);
    auto wk = F.W.row(k);
    for (std::size_t j = 0; j < R.cols(); ++j) rrow[j] += vik * wk[j];
  }
  return R;
}

inline RealMatrix residual_after(const RealMatrix& R, const FactorPair& F, std::size_t k) {
  RealMatrix E = R;
  for (std::size_t i = 0; i < E.rows(); ++i) {
    const double vik = F.V(i, k);
    if (vik == 0.0) continue;
    auto erow = E.row(i);
    auto wk = F.W.row(k);
    for (std::size_t j = 0; j < E.cols(); ++j) erow[j] -= vik * wk[j];
  }
  return E;
}

inline void mu_column_v(const RealMatrix& M, FactorPair& F, std::size_t k) {
  // V_k <- V_k o [M W_k^T] / [V W W_k^T]
  const std::size_t r = F.rank();
  auto wk = F.W.row(k);
  std::vector<double> wwt(r);
  for (std::size_t l = 0; l < r; ++l) wwt[l] = dot(F.W.row(l), wk);
  std::vector<double> updated(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i)
    updated[i] = multiplicative_entry(F.V(i, k), dot(M.row(i), wk), dot(F.V.row(i), wwt), 0.0);
  for (std::size_t i = 0; i < M.rows(); ++i) F.V(i, k) = updated[i];
}

inline void mu_column_w(const RealMatrix& M, FactorPair& F, std::size_t k) {
  // W_k <- W_k o [V_k^T M] / [V_k^T V W]
  const std::size_t r = F.rank();
  std::vector<double> num(M.cols(), 0.0);
  std::vector<double> vtv(r, 0.0);
  for (std::size_t i = 0; i < M.rows(); ++i) {
    const double vik = F.V(i, k);
    if (vik == 0.0) continue;
    auto mrow = M.row(i);
    for (std::size_t j = 0; j < M.cols(); ++j) num[j] += vik * mrow[j];
    auto vrow = F.V.row(i);
    for (std::size_t l = 0; l < r; ++l) vtv[l] += vik * vrow[l];
  }
  std::vector<double> den(M.cols(), 0.0);
  for (std::size_t l = 0; l < r; ++l) {
    auto wl = F.W.row(l);
    for (std::size_t j = 0; j < M.cols(); ++j) den[j] += vtv[l] * wl[j];
  }
  auto wk = F.W.row(k);
  for (std::size_t j = 0; j < M.cols(); ++j)
    wk[j] = multiplicative_entry(wk[j], num[j], den[j], 0.0);
}

inline void nf_r1_component(RealMatrix& E, FactorPair& F, std::size_t k, Side side) {
  const RealMatrix R = component_residual(E, F, k);
  const SignedSplit split = signed_split(R);
  const std::vector<double> v = F.V.column(k);
  std::vector<double> w(F.W.row(k).begin(), F.W.row(k).end());
  if (side == Side::V) {
    const std::vector<double> updated = rank1_nf_update(split, v, w, Side::V);
    for (std::size_t i = 0; i < updated.size(); ++i) F.V(i, k) = updated[i];
  } else {
    const std::vector<double> updated = rank1_nf_update(split, v, w, Side::W);
    std::copy(updated.begin(), updated.end(), F.W.row(k).begin());
  }
  E = residual_after(R, F, k);
}

inline void check_factorwise_inputs(const RealMatrix& M, const FactorPair& F) {
  check_factor_shapes(M, F);
  require_nonnegative_target(M);
}

}  // namespace detail

/// Single update of column k of V under `rule`, all other variables fixed.
inline void factorwise_update_v_column(const RealMatrix& M, FactorPair& F, std::size_t k,
                                       FactorwiseRule rule) {
  detail::check_factorwise_inputs(M, F);
  detail::require(k < F.rank(), ErrorCode::invalid_argument, "component index out of range");
  switch (rule) {
    case FactorwiseRule::mu_column: detail::mu_column_v(M, F, k); break;
    case FactorwiseRule::hals_opt: hals_update_v_column(M, F, k, 0.0); break;
    case FactorwiseRule::nf_r1: {
      RealMatrix E = subtract(M, multiply(F.V, F.W));
      detail::nf_r1_component(E, F, k, Side::V);
      break;
    }
  }
}

/// Single update of row k of W under `rule`, all other variables fixed.
inline void factorwise_update_w_row(const RealMatrix& M, FactorPair& F, std::size_t k,
                                    FactorwiseRule rule) {
  detail::check_factorwise_inputs(M, F);
  detail::require(k < F.rank(), ErrorCode::invalid_argument, "component index out of range");
  switch (rule) {
    case FactorwiseRule::mu_column: detail::mu_column_w(M, F, k); break;
    case FactorwiseRule::hals_opt: hals_update_w_row(M, F, k, 0.0); break;
    case FactorwiseRule::nf_r1: {
      RealMatrix E = subtract(M, multiply(F.V, F.W));
      detail::nf_r1_component(E, F, k, Side::W);
      break;
    }
  }
}

/// One cycle: every column of V, then every row of W, each updated by `rule`.
inline FactorPair factorwise_sweep(const RealMatrix& M, FactorPair F, FactorwiseRule rule) {
  detail::check_factorwise_inputs(M, F);
  const std::size_t r = F.rank();
  switch (rule) {
    case FactorwiseRule::hals_opt: return hals_sweep(M, std::move(F), 0.0);
    case FactorwiseRule::mu_column:
      for (std::size_t k = 0; k < r; ++k) detail::mu_column_v(M, F, k);
      for (std::size_t k = 0; k < r; ++k) detail::mu_column_w(M, F, k);
      return F;
    case FactorwiseRule::nf_r1: {
      // the sign split of R_k needs the explicit residual
      RealMatrix E = subtract(M, multiply(F.V, F.W));
      for (std::size_t k = 0; k < r; ++k) detail::nf_r1_component(E, F, k, Side::V);
      for (std::size_t k = 0; k < r; ++k) detail::nf_r1_component(E, F, k, Side::W);
      return F;
    }
  }
  return F;
}

}  // namespace nmfkit
