#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nmfkit/error.hpp"
#include "nmfkit/matrix.hpp"

namespace nmfkit {

using Edge = std::pair<std::size_t, std::size_t>;

/// Binary bipartite adjacency M_b (m x n) in compressed row form, with a
/// compressed column copy for transposed products.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Duplicate edges are merged.
  BipartiteGraph(std::size_t m, std::size_t n, std::vector<Edge> edges) : m_(m), n_(n) {
    for (const auto& [i, j] : edges)
      detail::require(i < m && j < n, ErrorCode::invalid_argument, "edge index out of range");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    row_ptr_.assign(m + 1, 0);
    col_ptr_.assign(n + 1, 0);
    for (const auto& [i, j] : edges) {
      ++row_ptr_[i + 1];
      ++col_ptr_[j + 1];
    }
    for (std::size_t i = 0; i < m; ++i) row_ptr_[i + 1] += row_ptr_[i];
    for (std::size_t j = 0; j < n; ++j) col_ptr_[j + 1] += col_ptr_[j];
    row_idx_.resize(edges.size());
    col_idx_.resize(edges.size());
    std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      col_idx_[e] = edges[e].second;  // sorted by row, then column
      row_idx_[fill[edges[e].second]++] = edges[e].first;
    }
  }

  static BipartiteGraph complete(std::size_t m, std::size_t n) {
    std::vector<Edge> edges;
    edges.reserve(m * n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) edges.emplace_back(i, j);
    return {m, n, std::move(edges)};
  }

  /// Every nonzero entry becomes an edge.
  static BipartiteGraph from_dense(const RealMatrix& adjacency) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < adjacency.rows(); ++i)
      for (std::size_t j = 0; j < adjacency.cols(); ++j)
        if (adjacency(i, j) != 0.0) edges.emplace_back(i, j);
    return {adjacency.rows(), adjacency.cols(), std::move(edges)};
  }

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return col_idx_.size(); }

  std::span<const std::size_t> row_neighbors(std::size_t i) const noexcept {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const std::size_t> col_neighbors(std::size_t j) const noexcept {
    return {row_idx_.data() + col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]};
  }

  bool has_edge(std::size_t i, std::size_t j) const noexcept {
    auto nb = row_neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j : row_neighbors(i)) out.emplace_back(i, j);
    return out;
  }

  /// M_b x
  std::vector<double> multiply(std::span<const double> x) const {
    std::vector<double> out(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t j : row_neighbors(i)) s += x[j];
      out[i] = s;
    }
    return out;
  }

  /// M_b^T y
  std::vector<double> multiply_transposed(std::span<const double> y) const {
    std::vector<double> out(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t i : col_neighbors(j)) s += y[i];
      out[j] = s;
    }
    return out;
  }

  /// y^T M_b x
  double bilinear(std::span<const double> y, std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (y[i] == 0.0) continue;
      double t = 0.0;
      for (std::size_t j : row_neighbors(i)) t += x[j];
      s += y[i] * t;
    }
    return s;
  }

  std::vector<std::size_t> isolated_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m_; ++i)
      if (row_ptr_[i + 1] == row_ptr_[i]) out.push_back(i);
    return out;
  }
  std::vector<std::size_t> isolated_cols() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n_; ++j)
      if (col_ptr_[j + 1] == col_ptr_[j]) out.push_back(j);
    return out;
  }

  RealMatrix to_dense() const {
    RealMatrix out(m_, n_);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j : row_neighbors(i)) out(i, j) = 1.0;
    return out;
  }

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.m_ == b.m_ && a.n_ == b.n_ && a.row_ptr_ == b.row_ptr_ && a.col_idx_ == b.col_idx_;
  }

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> row_idx_;
};

/// Vertex sets of a (candidate) complete bipartite subgraph. Indices sorted.
struct Biclique {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  std::size_t edges() const noexcept { return rows.size() * cols.size(); }
  bool empty() const noexcept { return edges() == 0; }

  friend bool operator==(const Biclique&, const Biclique&) = default;
  friend auto operator<=>(const Biclique&, const Biclique&) = default;
};

inline bool is_biclique(const BipartiteGraph& G, const Biclique& B) {
  for (std::size_t i : B.rows) {
    if (i >= G.rows()) return false;
    for (std::size_t j : B.cols)
      if (j >= G.cols() || !G.has_edge(i, j)) return false;
  }
  return true;
}

}  // namespace nmfkit
