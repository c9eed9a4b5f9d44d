#pragma once

// Independent brute-force and numerical checks. Test code only: nothing under
// include/ may depend on this header.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "nmfkit/error.hpp"
#include "nmfkit/graph.hpp"
#include "nmfkit/matrix.hpp"

namespace nmfkit::oracles {

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline Bits full_bits(std::size_t n) {
  Bits b((n + 63) / 64, ~std::uint64_t{0});
  if (n % 64 != 0 && !b.empty()) b.back() = (std::uint64_t{1} << (n % 64)) - 1;
  return b;
}

inline std::size_t popcount(const Bits& b) {
  std::size_t c = 0;
  for (auto w : b) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

inline std::vector<std::size_t> members(const Bits& b) {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < b.size(); ++w)
    for (std::size_t k = 0; k < 64; ++k)
      if (b[w] >> k & 1u) out.push_back(w * 64 + k);
  return out;
}

/// Adjacency of the smaller side as bitsets over the larger side.
struct SidedGraph {
  bool rows_small = true;
  std::size_t small = 0;
  std::size_t large = 0;
  std::vector<Bits> adj;
};

inline SidedGraph sided(const BipartiteGraph& G) {
  SidedGraph s;
  s.rows_small = G.rows() <= G.cols();
  s.small = s.rows_small ? G.rows() : G.cols();
  s.large = s.rows_small ? G.cols() : G.rows();
  s.adj.assign(s.small, Bits((s.large + 63) / 64, 0));
  for (std::size_t i = 0; i < G.rows(); ++i)
    for (std::size_t j : G.row_neighbors(i)) {
      const std::size_t a = s.rows_small ? i : j;
      const std::size_t b = s.rows_small ? j : i;
      s.adj[a][b / 64] |= std::uint64_t{1} << (b % 64);
    }
  return s;
}

inline Biclique orient(const SidedGraph& s, std::vector<std::size_t> small_side,
                       std::vector<std::size_t> large_side) {
  if (s.rows_small) return {std::move(small_side), std::move(large_side)};
  return {std::move(large_side), std::move(small_side)};
}

inline void search(const SidedGraph& s, std::size_t next, std::vector<std::size_t>& chosen,
                   const Bits& common, std::size_t& best, Biclique& best_biclique) {
  if (next == s.small) {
    const std::size_t edges = chosen.size() * popcount(common);
    if (edges > best) {
      best = edges;
      best_biclique = orient(s, chosen, members(common));
    }
    return;
  }
  // upper bound: every remaining vertex joins and the neighbourhood stays intact
  if ((chosen.size() + (s.small - next)) * popcount(common) <= best) return;
  search(s, next + 1, chosen, common, best, best_biclique);
  Bits narrowed = common;
  for (std::size_t w = 0; w < narrowed.size(); ++w) narrowed[w] &= s.adj[next][w];
  chosen.push_back(next);
  search(s, next + 1, chosen, narrowed, best, best_biclique);
  chosen.pop_back();
}

}  // namespace detail

/// Exact maximum-edge biclique by enumerating subsets of the smaller side.
inline Biclique brute_force_max_biclique(const BipartiteGraph& G) {
  const auto s = detail::sided(G);
  if (s.small > 22) throw Error(ErrorCode::instance_too_large, "smaller side exceeds 22");
  std::size_t best = 0;
  Biclique best_biclique;
  std::vector<std::size_t> chosen;
  detail::search(s, 0, chosen, detail::full_bits(s.large), best, best_biclique);
  return best_biclique;
}

/// Every maximal biclique with both sides nonempty.
inline std::vector<Biclique> enumerate_maximal_bicliques(const BipartiteGraph& G) {
  const auto s = detail::sided(G);
  if (s.small > 16) throw Error(ErrorCode::instance_too_large, "smaller side exceeds 16");
  std::set<Biclique> found;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << s.small); ++mask) {
    detail::Bits common = detail::full_bits(s.large);
    for (std::size_t a = 0; a < s.small; ++a)
      if (mask >> a & 1u)
        for (std::size_t w = 0; w < common.size(); ++w) common[w] &= s.adj[a][w];
    const auto large_side = detail::members(common);
    if (large_side.empty()) continue;
    std::vector<std::size_t> closure;
    for (std::size_t a = 0; a < s.small; ++a) {
      bool all = true;
      for (std::size_t b : large_side)
        if (!(s.adj[a][b / 64] >> (b % 64) & 1u)) {
          all = false;
          break;
        }
      if (all) closure.push_back(a);
    }
    found.insert(detail::orient(s, std::move(closure), large_side));
  }
  return {found.begin(), found.end()};
}

/// ||M - VW||_F^2 by direct entrywise summation.
inline double direct_error(const RealMatrix& M, const RealMatrix& V, const RealMatrix& W) {
  double s = 0.0;
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) {
      double p = 0.0;
      for (std::size_t k = 0; k < V.cols(); ++k) p += V(i, k) * W(k, j);
      s += (M(i, j) - p) * (M(i, j) - p);
    }
  return s;
}

/// Central-difference gradient of ||M - VW||_F^2.
inline std::pair<RealMatrix, RealMatrix> finite_diff_gradient(const RealMatrix& M,
                                                              const FactorPair& F, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::invalid_argument, "step must be positive");
  RealMatrix V = F.V;
  RealMatrix W = F.W;
  RealMatrix gv(V.rows(), V.cols());
  RealMatrix gw(W.rows(), W.cols());
  auto probe = [&](RealMatrix& X, RealMatrix& G) {
    for (std::size_t k = 0; k < X.size(); ++k) {
      const double saved = X.values()[k];
      X.values()[k] = saved + step;
      const double up = direct_error(M, V, W);
      X.values()[k] = saved - step;
      const double down = direct_error(M, V, W);
      X.values()[k] = saved;
      G.values()[k] = (up - down) / (2.0 * step);
    }
  };
  probe(V, gv);
  probe(W, gw);
  return {std::move(gv), std::move(gw)};
}

struct Rank1Optimum {
  double error = 0.0;
  std::vector<double> v;
  std::vector<double> w;
};

namespace detail {

inline double rank1_error(const RealMatrix& M, const std::vector<double>& v,
                          const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) {
      const double r = M(i, j) - v[i] * w[j];
      s += r * r;
    }
  return s;
}

inline std::vector<double> best_v_for(const RealMatrix& M, const std::vector<double>& w) {
  double ww = 0.0;
  for (double x : w) ww += x * x;
  std::vector<double> v(M.rows(), 0.0);
  if (ww == 0.0) return v;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < M.cols(); ++j) s += M(i, j) * w[j];
    v[i] = std::max(0.0, s / ww);
  }
  return v;
}

inline std::vector<double> best_w_for(const RealMatrix& M, const std::vector<double>& v) {
  double vv = 0.0;
  for (double x : v) vv += x * x;
  std::vector<double> w(M.cols(), 0.0);
  if (vv == 0.0) return w;
  for (std::size_t j = 0; j < M.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < M.rows(); ++i) s += M(i, j) * v[i];
    w[j] = std::max(0.0, s / vv);
  }
  return w;
}

}  // namespace detail

/// Grid search of min ||M - v w||_F^2 over v, w >= 0 for tiny M (at most 3x3):
/// w ranges over a grid of the nonnegative unit sphere, v is optimal for each w,
/// and the best grid point is polished by exact alternating minimization.
inline Rank1Optimum grid_best_rank1(const RealMatrix& M, std::size_t resolution = 400) {
  if (M.rows() > 3 || M.cols() > 3)
    throw Error(ErrorCode::instance_too_large, "grid oracle handles at most 3x3");
  constexpr double quarter = 1.5707963267948966;
  std::vector<std::vector<double>> grid;
  const std::size_t n = M.cols();
  if (n == 1) {
    grid.push_back({1.0});
  } else if (n == 2) {
    for (std::size_t a = 0; a <= resolution; ++a) {
      const double t = quarter * static_cast<double>(a) / static_cast<double>(resolution);
      grid.push_back({std::cos(t), std::sin(t)});
    }
  } else {
    for (std::size_t a = 0; a <= resolution; ++a)
      for (std::size_t b = 0; b <= resolution; ++b) {
        const double t = quarter * static_cast<double>(a) / static_cast<double>(resolution);
        const double p = quarter * static_cast<double>(b) / static_cast<double>(resolution);
        grid.push_back({std::cos(t) * std::cos(p), std::cos(t) * std::sin(p), std::sin(t)});
      }
  }

  Rank1Optimum best;
  best.error = -1.0;
  for (const auto& w : grid) {
    const auto v = detail::best_v_for(M, w);
    const double e = detail::rank1_error(M, v, w);
    if (best.error < 0.0 || e < best.error) best = {e, v, w};
  }

  Rank1Optimum polished = best;
  for (int it = 0; it < 2000; ++it) {
    auto v = detail::best_v_for(M, polished.w);
    auto w = detail::best_w_for(M, v);
    const double e = detail::rank1_error(M, v, w);
    if (e > polished.error) break;
    polished = {e, std::move(v), std::move(w)};
  }
  return polished.error <= best.error ? polished : best;
}

}  // namespace nmfkit::oracles
