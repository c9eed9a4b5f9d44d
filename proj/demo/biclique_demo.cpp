// Compares the homotopy heuristic with the greedy baseline on one random graph.
#include <cstdio>

#include "nmfkit/nmfkit.hpp"

int main() {
  using namespace nmfkit;
  const BipartiteGraph G = gen_random_bipartite(100, 100, 0.9, 7);
  const Biclique g = greedy_biclique(G);
  std::printf("greedy: %zu x %zu = %zu edges\n", g.rows.size(), g.cols.size(), g.edges());

  std::size_t best = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    HomotopyConfig cfg;
    cfg.seed = seed;
    const auto r = mbfa_run(G, cfg);
    std::printf("mult seed %llu: %zu edges after %zu iterations%s\n",
                static_cast<unsigned long long>(seed), r.biclique.edges(), r.iterations,
                r.converged ? "" : " (no feasible rounding)");
    if (r.biclique.edges() > best) best = r.biclique.edges();
  }
  std::printf("best of 10: %zu edges\n", best);
}
