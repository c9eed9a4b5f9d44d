// Factorizes a small nonnegative matrix with each update rule and prints the
// error after a fixed number of cycles.
#include <cstdio>

#include "nmfkit/nmfkit.hpp"

int main() {
  using namespace nmfkit;
  Rng rng(42);
  const RealMatrix M = multiply(random_positive(20, 4, rng), random_positive(4, 15, rng));

  const char* names[] = {"mu", "mu-eps", "hals", "hals-eps", "factorwise:nf_r1"};
  for (const char* name : names) {
    SolverConfig cfg;
    cfg.algorithm = *parse_algorithm(name, &cfg.rule);
    cfg.rank = 4;
    cfg.max_iters = 200;
    cfg.seed = 1;
    const auto result = solve(M, cfg);
    std::printf("%-18s error %.3e  kkt %.3e\n", name, result.trace.records.back().error,
                kkt_residual(M, result.factors, uses_epsilon(cfg.algorithm) ? cfg.epsilon : 0.0));
  }

  const auto [v, w, iters] = rank1_power(M);
  std::printf("rank-one power method: %zu iterations, |v| = %zu, |w| = %zu\n", iters, v.size(),
              w.size());
}
