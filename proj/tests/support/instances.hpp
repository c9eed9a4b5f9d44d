#pragma once

// Test instance generators shared by the unit tests and the acceptance run.

#include <algorithm>
#include <numeric>
#include <vector>

#include "nmfkit/graph.hpp"
#include "nmfkit/graph_io.hpp"
#include "nmfkit/random.hpp"

namespace nmfkit::instances {

struct PlantedBlock {
  BipartiteGraph graph;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

/// n x n noise of density `background` with a k x k block of density
/// `block_density` on randomly chosen rows and columns.
inline PlantedBlock planted_block(std::size_t n, std::size_t k, double background,
                                  double block_density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  PlantedBlock out;
  std::shuffle(perm.begin(), perm.end(), rng);
  out.rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  std::shuffle(perm.begin(), perm.end(), rng);
  out.cols.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(out.rows.begin(), out.rows.end());
  std::sort(out.cols.begin(), out.cols.end());

  std::vector<char> in_rows(n, 0), in_cols(n, 0);
  for (std::size_t i : out.rows) in_rows[i] = 1;
  for (std::size_t j : out.cols) in_cols[j] = 1;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double p = in_rows[i] && in_cols[j] ? block_density : background;
      if (uniform_closed_open(rng) < p) edges.emplace_back(i, j);
    }
  out.graph = BipartiteGraph(n, n, std::move(edges));
  return out;
}

/// |found ∩ truth| / max(|found|, |truth|); both sorted.
inline double overlap(const std::vector<std::size_t>& found, const std::vector<std::size_t>& truth) {
  const std::size_t denom = std::max(found.size(), truth.size());
  if (denom == 0) return 0.0;
  std::size_t common = 0;
  for (std::size_t x : found) common += std::binary_search(truth.begin(), truth.end(), x);
  return static_cast<double>(common) / static_cast<double>(denom);
}

/// johnson8-2-4: vertices are the 2-subsets of {1..8}, adjacent when disjoint.
inline EdgeListGraph johnson_8_2_4() {
  std::vector<std::pair<int, int>> subsets;
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) subsets.emplace_back(a, b);
  EdgeListGraph g;
  g.vertex_count = subsets.size();
  for (std::size_t i = 0; i < subsets.size(); ++i)
    for (std::size_t j = i + 1; j < subsets.size(); ++j) {
      const auto [a, b] = subsets[i];
      const auto [c, d] = subsets[j];
      if (a != c && a != d && b != c && b != d) g.edges.emplace_back(i, j);
    }
  return g;
}

/// Random bipartite graph with sides drawn from [1, max_side].
inline BipartiteGraph small_random_graph(Rng& rng, std::size_t max_side) {
  const std::size_t m = 1 + rng() % max_side;
  const std::size_t n = 1 + rng() % max_side;
  const double density = 0.2 + 0.6 * uniform_closed_open(rng);
  return gen_random_bipartite(m, n, density, rng());
}

}  // namespace nmfkit::instances
