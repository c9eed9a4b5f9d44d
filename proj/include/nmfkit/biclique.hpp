#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "nmfkit/error.hpp"
#include "nmfkit/graph.hpp"
#include "nmfkit/matrix.hpp"
#include "nmfkit/random.hpp"

namespace nmfkit {

/// M_d = (1 + d) M_b - d 1: 1 on edges, -d on non-edges.
inline RealMatrix build_md(const BipartiteGraph& G, double d) {
  detail::require(std::isfinite(d) && d >= 0.0, ErrorCode::invalid_argument,
                  "d must be finite and nonnegative");
  RealMatrix out(G.rows(), G.cols(), -d);
  for (std::size_t i = 0; i < G.rows(); ++i)
    for (std::size_t j : G.row_neighbors(i)) out(i, j) = 1.0;
  return out;
}

struct HomotopyConfig {
  double d0 = 1.0;
  double alpha = 1.1;
  std::optional<double> d_max;  // set: bicluster mode, d = min(alpha d, d_max)
  std::size_t max_iters = 200;
  double round_threshold = 0.5;
  std::size_t burn_in = 50;  // rounding is first checked after this many steps
  std::uint64_t seed = 0;

  static HomotopyConfig bicluster(double d_max, std::uint64_t seed = 0) {
    HomotopyConfig cfg;
    cfg.d0 = 1e-5;
    cfg.alpha = 1.025;
    cfg.d_max = d_max;
    cfg.max_iters = 500;
    cfg.seed = seed;
    return cfg;
  }
};

struct HomotopyRecord {
  std::size_t iter = 0;
  double d = 0.0;
  double error = 0.0;  // ||M_d - vw||_F^2 at the d used by this step
};

struct BicliqueResult {
  Biclique biclique;
  bool converged = false;  // a nonempty feasible rounding was found
  std::size_t iterations = 0;
  std::vector<double> v;
  std::vector<double> w;
  std::vector<HomotopyRecord> trace;
};

namespace detail {

inline double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

inline void check_vectors(const BipartiteGraph& G, std::span<const double> v,
                          std::span<const double> w) {
  require(v.size() == G.rows() && w.size() == G.cols(), ErrorCode::shape_mismatch,
          "vector lengths do not match the graph");
}

/// <M_d, v w>
inline double md_inner(const BipartiteGraph& G, double d, std::span<const double> v,
                       std::span<const double> w) {
  return (1.0 + d) * G.bilinear(v, w) - d * sum(v) * sum(w);
}

/// ||M_d - v w||_F^2 in O(|E| + m + n).
inline double md_error(const BipartiteGraph& G, double d, std::span<const double> v,
                       std::span<const double> w) {
  const double edges = static_cast<double>(G.edge_count());
  const double non_edges = static_cast<double>(G.rows() * G.cols()) - edges;
  const double target = edges + d * d * non_edges;
  const double approx = squared_norm(v) * squared_norm(w);
  const double value = target - 2.0 * md_inner(G, d, v, w) + approx;
  return std::max(0.0, value);
}

/// One side of the homotopy update: x o [A y] / [x ||y||^2 + d (||y||_1 - A y)].
inline std::vector<double> mbfa_half_step(std::span<const double> x, std::span<const double> y,
                                          const std::vector<double>& ay, double d) {
  const double yy = squared_norm(y);
  const double y1 = sum(y);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      out[i] = 0.0;
      continue;
    }
    const double missing = std::max(0.0, y1 - ay[i]);
    const double den = x[i] * yy + d * missing;
    if (!(den > 0.0))
      throw Error(ErrorCode::positivity_violation, "zero denominator in homotopy update");
    out[i] = x[i] * (ay[i] / den);
  }
  return out;
}

inline std::pair<std::vector<double>, std::vector<double>> scaled_positive_start(
    const BipartiteGraph& G, double d, Rng& rng) {
  std::vector<double> v(G.rows());
  std::vector<double> w(G.cols());
  for (double& x : v) x = uniform_open_closed(rng);
  for (double& x : w) x = uniform_open_closed(rng);
  const double norm = squared_norm(v) * squared_norm(w);
  double alpha = md_inner(G, d, v, w) / norm;
  // M_d may be orthogonal to (or against) a uniform start on sparse graphs
  if (!(alpha > 0.0)) alpha = G.bilinear(v, w) / norm;
  if (alpha > 0.0) {
    const double root = std::sqrt(alpha);
    for (double& x : v) x *= root;
    for (double& x : w) x *= root;
  }
  return {std::move(v), std::move(w)};
}

inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> rounded_support(
    std::span<const double> v, std::span<const double> w, double scale, double threshold) {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  const double vmax = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  const double wmax = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (scale * v[i] * wmax >= threshold) rows.push_back(i);
  for (std::size_t j = 0; j < w.size(); ++j)
    if (scale * vmax * w[j] >= threshold) cols.push_back(j);
  return {std::move(rows), std::move(cols)};
}

/// Optimal scale of v w against M_b, or 0 when undefined.
inline double scale_against_graph(const BipartiteGraph& G, std::span<const double> v,
                                  std::span<const double> w) {
  const double norm = squared_norm(v) * squared_norm(w);
  if (!(norm > 0.0)) return 0.0;
  return G.bilinear(v, w) / norm;
}

inline std::size_t edges_within(const BipartiteGraph& G, std::span<const std::size_t> rows,
                                std::span<const std::size_t> cols) {
  std::vector<char> in_cols(G.cols(), 0);
  for (std::size_t j : cols) in_cols[j] = 1;
  std::size_t count = 0;
  for (std::size_t i : rows)
    for (std::size_t j : G.row_neighbors(i)) count += in_cols[j];
  return count;
}

}  // namespace detail

/// One step of the homotopy multiplicative update at fixed d: v first, then w
/// with the new v. M_b is only touched through sparse products.
inline std::pair<std::vector<double>, std::vector<double>> mbfa_step(const BipartiteGraph& G,
                                                                     std::span<const double> v,
                                                                     std::span<const double> w,
                                                                     double d) {
  detail::check_vectors(G, v, w);
  detail::require(d >= 0.0, ErrorCode::invalid_argument, "d must be nonnegative");
  std::vector<double> v_new = detail::mbfa_half_step(v, w, G.multiply(w), d);
  std::vector<double> w_new = detail::mbfa_half_step(w, v_new, G.multiply_transposed(v_new), d);
  return {std::move(v_new), std::move(w_new)};
}

/// Binarizes the optimally scaled product v w at `threshold`. Returns the
/// biclique when the ones form a rectangle contained in M_b (possibly empty).
inline std::optional<Biclique> round_to_biclique(std::span<const double> v,
                                                 std::span<const double> w,
                                                 const BipartiteGraph& G, double threshold = 0.5) {
  detail::check_vectors(G, v, w);
  detail::require(threshold > 0.0 && threshold < 1.0, ErrorCode::invalid_argument,
                  "threshold must lie in (0, 1)");
  const double scale = detail::scale_against_graph(G, v, w);
  if (!(scale > 0.0)) return Biclique{};
  auto [rows, cols] = detail::rounded_support(v, w, scale, threshold);
  if (rows.empty() || cols.empty()) return Biclique{};
  double vmin = std::numeric_limits<double>::infinity();
  double wmin = std::numeric_limits<double>::infinity();
  for (std::size_t i : rows) vmin = std::min(vmin, v[i]);
  for (std::size_t j : cols) wmin = std::min(wmin, w[j]);
  if (scale * vmin * wmin < threshold) return std::nullopt;  // not a rectangle
  if (detail::edges_within(G, rows, cols) != rows.size() * cols.size()) return std::nullopt;
  return Biclique{std::move(rows), std::move(cols)};
}

/// Homotopy multiplicative updates on M_d with d <- alpha d (capped at d_max
/// when set). Stops at the first nonempty feasible rounding after burn-in.
inline BicliqueResult mbfa_run(const BipartiteGraph& G, const HomotopyConfig& cfg) {
  detail::require(G.rows() > 0 && G.cols() > 0, ErrorCode::invalid_argument, "empty graph");
  detail::require(cfg.d0 > 0.0 && cfg.alpha >= 1.0, ErrorCode::invalid_argument,
                  "need d0 > 0 and alpha >= 1");
  detail::require(!cfg.d_max || *cfg.d_max > 0.0, ErrorCode::invalid_argument,
                  "d_max must be positive");
  detail::require(cfg.round_threshold > 0.0 && cfg.round_threshold < 1.0,
                  ErrorCode::invalid_argument, "threshold must lie in (0, 1)");
  constexpr double d_ceiling = 1e100;

  Rng rng(cfg.seed);
  BicliqueResult out;
  std::tie(out.v, out.w) = detail::scaled_positive_start(G, cfg.d0, rng);
  double d = cfg.d0;
  for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
    std::tie(out.v, out.w) = mbfa_step(G, out.v, out.w, d);
    out.iterations = it;
    out.trace.push_back({it, d, detail::md_error(G, d, out.v, out.w)});
    if (!cfg.d_max && it > cfg.burn_in) {
      auto rounded = round_to_biclique(out.v, out.w, G, cfg.round_threshold);
      if (rounded && !rounded->empty()) {
        out.biclique = std::move(*rounded);
        out.converged = true;
        return out;
      }
    }
    d = std::min(cfg.alpha * d, cfg.d_max.value_or(d_ceiling));
  }
  return out;
}

struct BiclusterReport {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::size_t size = 0;   // |rows| * |cols|
  std::size_t edges = 0;  // edges of M_b inside rows x cols
  double density = 0.0;
  BicliqueResult run;
};

/// Capped homotopy: returns the support of the rounded product as a dense
/// (not necessarily complete) submatrix.
inline BiclusterReport bicluster_run(const BipartiteGraph& G, HomotopyConfig cfg) {
  detail::require(cfg.d_max.has_value(), ErrorCode::invalid_argument,
                  "bicluster mode needs d_max");
  BiclusterReport report;
  report.run = mbfa_run(G, cfg);
  const auto& v = report.run.v;
  const auto& w = report.run.w;
  const double scale = detail::scale_against_graph(G, v, w);
  if (scale > 0.0) {
    std::tie(report.rows, report.cols) =
        detail::rounded_support(v, w, scale, cfg.round_threshold);
  }
  report.size = report.rows.size() * report.cols.size();
  report.edges = detail::edges_within(G, report.rows, report.cols);
  report.density = report.size == 0 ? 0.0
                                    : static_cast<double>(report.edges) /
                                          static_cast<double>(report.size);
  return report;
}

/// Repeatedly adds the vertex with the most neighbours in the remaining graph,
/// deleting the vertices of the other side it is not adjacent to. Ties go to
/// rows, then to the lowest index.
inline Biclique greedy_biclique(const BipartiteGraph& G) {
  const std::size_t m = G.rows();
  const std::size_t n = G.cols();
  std::vector<char> row_alive(m, 1), col_alive(n, 1);
  std::vector<char> row_taken(m, 0), col_taken(n, 0);
  Biclique out;

  for (;;) {
    // degree in the remaining graph = chosen vertices of the other side + live candidates
    std::size_t best_degree = 0;
    bool found = false;
    bool best_is_row = true;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (!row_alive[i] || row_taken[i]) continue;
      std::size_t deg = out.cols.size();
      for (std::size_t j : G.row_neighbors(i)) deg += col_alive[j] && !col_taken[j];
      if (!found || deg > best_degree) {
        found = true;
        best_degree = deg;
        best_is_row = true;
        best_index = i;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!col_alive[j] || col_taken[j]) continue;
      std::size_t deg = out.rows.size();
      for (std::size_t i : G.col_neighbors(j)) deg += row_alive[i] && !row_taken[i];
      if (!found || deg > best_degree) {
        found = true;
        best_degree = deg;
        best_is_row = false;
        best_index = j;
      }
    }
    if (!found) break;

    if (best_is_row) {
      row_taken[best_index] = 1;
      out.rows.push_back(best_index);
      std::vector<char> keep(n, 0);
      for (std::size_t j : G.row_neighbors(best_index)) keep[j] = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (!keep[j]) col_alive[j] = 0;
    } else {
      col_taken[best_index] = 1;
      out.cols.push_back(best_index);
      std::vector<char> keep(m, 0);
      for (std::size_t i : G.col_neighbors(best_index)) keep[i] = 1;
      for (std::size_t i = 0; i < m; ++i)
        if (!keep[i]) row_alive[i] = 0;
    }
  }
  std::sort(out.rows.begin(), out.rows.end());
  std::sort(out.cols.begin(), out.cols.end());
  return out;
}

struct MotzkinStraussResult {
  std::vector<double> x;
  std::vector<double> y;
  Biclique biclique;
};

namespace detail {

inline void normalize_power(std::vector<double>& x, double exponent) {
  double s = 0.0;
  for (double v : x) s += std::pow(v, exponent);
  const double factor = 1.0 / std::pow(s, 1.0 / exponent);
  for (double& v : x) v *= factor;
}

/// Drops the vertex with the most missing edges until rows x cols is complete.
inline Biclique repair_to_biclique(const BipartiteGraph& G, std::vector<std::size_t> rows,
                                   std::vector<std::size_t> cols) {
  for (;;) {
    std::vector<char> in_rows(G.rows(), 0), in_cols(G.cols(), 0);
    for (std::size_t i : rows) in_rows[i] = 1;
    for (std::size_t j : cols) in_cols[j] = 1;
    std::size_t worst = 0;
    bool worst_is_row = true;
    std::size_t worst_pos = 0;
    for (std::size_t p = 0; p < rows.size(); ++p) {
      std::size_t hits = 0;
      for (std::size_t j : G.row_neighbors(rows[p])) hits += in_cols[j];
      const std::size_t missing = cols.size() - hits;
      if (missing > worst) {
        worst = missing;
        worst_is_row = true;
        worst_pos = p;
      }
    }
    for (std::size_t p = 0; p < cols.size(); ++p) {
      std::size_t hits = 0;
      for (std::size_t i : G.col_neighbors(cols[p])) hits += in_rows[i];
      const std::size_t missing = rows.size() - hits;
      if (missing > worst) {
        worst = missing;
        worst_is_row = false;
        worst_pos = p;
      }
    }
    if (worst == 0) break;
    if (worst_is_row) rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(worst_pos));
    else cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(worst_pos));
  }
  return {std::move(rows), std::move(cols)};
}

}  // namespace detail

/// Generalized Motzkin-Strauss multiplicative updates for
/// max x^T M_b y s.t. sum x^a = 1, sum y^b = 1 (x first, then y with the new x),
/// followed by thresholding at half the largest entry and a greedy repair.
/// Starts from the given positive x0, y0.
inline MotzkinStraussResult motzkin_strauss_run(const BipartiteGraph& G, double exponent_alpha,
                                                double exponent_beta, std::size_t iters,
                                                std::vector<double> x0, std::vector<double> y0,
                                                double support_threshold = 0.5) {
  detail::require(exponent_alpha > 1.0 && exponent_beta > 1.0, ErrorCode::invalid_argument,
                  "exponents must exceed 1");
  detail::check_vectors(G, x0, y0);
  detail::require(std::all_of(x0.begin(), x0.end(), [](double t) { return t > 0.0; }) &&
                      std::all_of(y0.begin(), y0.end(), [](double t) { return t > 0.0; }),
                  ErrorCode::invalid_argument, "starting point must be positive");
  MotzkinStraussResult out;
  out.x = std::move(x0);
  out.y = std::move(y0);
  detail::normalize_power(out.x, exponent_alpha);
  detail::normalize_power(out.y, exponent_beta);

  auto half_step = [](std::vector<double>& x, const std::vector<double>& ay, double exponent) {
    const double value = dot(x, ay);
    if (!(value > 0.0)) throw Error(ErrorCode::degenerate_factor, "x^T M_b y vanished");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::pow(x[i] * ay[i] / value, 1.0 / exponent);
    detail::normalize_power(x, exponent);
  };
  for (std::size_t it = 0; it < iters; ++it) {
    half_step(out.x, G.multiply(out.y), exponent_alpha);
    half_step(out.y, G.multiply_transposed(out.x), exponent_beta);
  }

  std::vector<std::size_t> rows, cols;
  const double xmax = *std::max_element(out.x.begin(), out.x.end());
  const double ymax = *std::max_element(out.y.begin(), out.y.end());
  for (std::size_t i = 0; i < out.x.size(); ++i)
    if (out.x[i] >= support_threshold * xmax) rows.push_back(i);
  for (std::size_t j = 0; j < out.y.size(); ++j)
    if (out.y[j] >= support_threshold * ymax) cols.push_back(j);
  out.biclique = detail::repair_to_biclique(G, std::move(rows), std::move(cols));
  return out;
}

/// Random positive start drawn from `seed`.
inline MotzkinStraussResult motzkin_strauss_run(const BipartiteGraph& G, double exponent_alpha,
                                                double exponent_beta, std::size_t iters,
                                                std::uint64_t seed,
                                                double support_threshold = 0.5) {
  Rng rng(seed);
  std::vector<double> x(G.rows()), y(G.cols());
  for (double& v : x) v = uniform_open_closed(rng);
  for (double& v : y) v = uniform_open_closed(rng);
  return motzkin_strauss_run(G, exponent_alpha, exponent_beta, iters, std::move(x), std::move(y),
                             support_threshold);
}

/// True iff v = max(0, M_d w / ||w||^2) and w = max(0, v^T M_d / ||v||^2)
/// hold entrywise within tol (relative to max(1, largest entry)).
inline bool biclique_stationarity_check(const BipartiteGraph& G, double d,
                                        std::span<const double> v, std::span<const double> w,
                                        double tol) {
  detail::check_vectors(G, v, w);
  const double vv = squared_norm(v);
  const double ww = squared_norm(w);
  detail::require(vv > 0.0 && ww > 0.0, ErrorCode::invalid_argument, "v and w must be nonzero");

  auto holds = [&](std::span<const double> x, const std::vector<double>& by, double y1,
                   double yy) {
    double scale = 1.0;
    for (double value : x) scale = std::max(scale, std::abs(value));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double target = std::max(0.0, ((1.0 + d) * by[i] - d * y1) / yy);
      if (std::abs(x[i] - target) > tol * scale) return false;
    }
    return true;
  };
  return holds(v, G.multiply(w), detail::sum(w), ww) &&
         holds(w, G.multiply_transposed(v), detail::sum(v), vv);
}

/// True iff no single vertex can be added to B while keeping it complete.
inline bool is_maximal_biclique(const BipartiteGraph& G, const Biclique& B) {
  detail::require(is_biclique(G, B), ErrorCode::invalid_argument, "B is not a biclique of G");
  std::vector<char> in_rows(G.rows(), 0), in_cols(G.cols(), 0);
  for (std::size_t i : B.rows) in_rows[i] = 1;
  for (std::size_t j : B.cols) in_cols[j] = 1;
  for (std::size_t i = 0; i < G.rows(); ++i) {
    if (in_rows[i]) continue;
    std::size_t hits = 0;
    for (std::size_t j : G.row_neighbors(i)) hits += in_cols[j];
    if (hits == B.cols.size()) return false;
  }
  for (std::size_t j = 0; j < G.cols(); ++j) {
    if (in_cols[j]) continue;
    std::size_t hits = 0;
    for (std::size_t i : G.col_neighbors(j)) hits += in_rows[i];
    if (hits == B.rows.size()) return false;
  }
  return true;
}

}  // namespace nmfkit
