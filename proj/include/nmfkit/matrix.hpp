#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "nmfkit/error.hpp"

namespace nmfkit {

/// Dense real matrix stored row-major. Entries are always finite.
class RealMatrix {
 public:
  RealMatrix() = default;

  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    detail::require(std::isfinite(fill), ErrorCode::invalid_argument, "non-finite fill value");
  }

  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    detail::require(data_.size() == rows_ * cols_, ErrorCode::shape_mismatch,
                    "data length differs from rows*cols");
    detail::require(all_finite(), ErrorCode::invalid_argument, "non-finite matrix entry");
  }

  RealMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      detail::require(row.size() == cols_, ErrorCode::shape_mismatch, "ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
    detail::require(all_finite(), ErrorCode::invalid_argument, "non-finite matrix entry");
  }

  static RealMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols, 0.0}; }
  static RealMatrix ones(std::size_t rows, std::size_t cols) { return {rows, cols, 1.0}; }

  static RealMatrix identity(std::size_t n) {
    RealMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
  }

  double min_value() const noexcept {
    return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
  }

  RealMatrix transposed() const {
    RealMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  friend bool operator==(const RealMatrix& a, const RealMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// V (m x r) and W (r x n) with the entrywise lower bound they respect (0 or epsilon).
struct FactorPair {
  RealMatrix V;
  RealMatrix W;
  double lower_bound = 0.0;

  std::size_t rank() const noexcept { return V.cols(); }
};

/// Positive and negative parts with P - N = M.
struct SignedSplit {
  RealMatrix P;
  RealMatrix N;
};

// Small dense kernels. Loops are ordered for row-major access.

inline RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  detail::require(a.cols() == b.rows(), ErrorCode::shape_mismatch, "multiply: inner dimensions");
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto src = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aik * src[j];
    }
  }
  return out;
}

/// a^T b
inline RealMatrix multiply_at_b(const RealMatrix& a, const RealMatrix& b) {
  detail::require(a.rows() == b.rows(), ErrorCode::shape_mismatch, "multiply_at_b: row counts");
  RealMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto arow = a.row(k);
    auto brow = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      auto dst = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aki * brow[j];
    }
  }
  return out;
}

/// a b^T
inline RealMatrix multiply_a_bt(const RealMatrix& a, const RealMatrix& b) {
  detail::require(a.cols() == b.cols(), ErrorCode::shape_mismatch, "multiply_a_bt: column counts");
  RealMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto arow = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto brow = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += arow[k] * brow[k];
      out(i, j) = s;
    }
  }
  return out;
}

inline RealMatrix subtract(const RealMatrix& a, const RealMatrix& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::shape_mismatch,
                  "subtract: shapes differ");
  RealMatrix out = a;
  auto dst = out.values();
  auto src = b.values();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] -= src[k];
  return out;
}

inline double inner(const RealMatrix& a, const RealMatrix& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::shape_mismatch,
                  "inner: shapes differ");
  double s = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

inline double squared_norm(const RealMatrix& a) { return inner(a, a); }

inline double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

inline double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::shape_mismatch,
                  "max_abs_diff: shapes differ");
  double best = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t k = 0; k < x.size(); ++k) best = std::max(best, std::abs(x[k] - y[k]));
  return best;
}

inline void scale_in_place(RealMatrix& a, double factor) {
  for (double& x : a.values()) x *= factor;
}

inline bool is_nonnegative(const RealMatrix& a) {
  auto v = a.values();
  return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
}

}  // namespace nmfkit
