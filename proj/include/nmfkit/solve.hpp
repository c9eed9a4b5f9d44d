#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nmfkit/error.hpp"
#include "nmfkit/linalg.hpp"
#include "nmfkit/matrix.hpp"
#include "nmfkit/nf.hpp"
#include "nmfkit/nmf.hpp"
#include "nmfkit/random.hpp"

namespace nmfkit {

enum class Algorithm { mu, mu_eps, hals, hals_eps, factorwise };

struct SolverConfig {
  Algorithm algorithm = Algorithm::hals;
  FactorwiseRule rule = FactorwiseRule::hals_opt;  // used when algorithm == factorwise
  std::size_t rank = 1;
  double epsilon = default_epsilon;
  std::size_t max_iters = 100;
  std::uint64_t seed = 0;
  double tol_kkt = 0.0;  // <= 0 disables the stationarity stop
  bool record_trace = true;
};

struct TraceRecord {
  std::size_t iter = 0;
  double error = 0.0;
  double wall_seconds = 0.0;
};

/// Iteration 0 is the scaled initial point.
struct ConvergenceTrace {
  std::vector<TraceRecord> records;
};

struct SolveResult {
  FactorPair factors;
  ConvergenceTrace trace;
  std::size_t iterations = 0;
  bool stationary = false;  // stopped on tol_kkt
  std::vector<std::string> warnings;
};

inline bool uses_epsilon(Algorithm a) { return a == Algorithm::mu_eps || a == Algorithm::hals_eps; }

inline std::optional<Algorithm> parse_algorithm(std::string_view name,
                                                FactorwiseRule* rule = nullptr) {
  if (name == "mu") return Algorithm::mu;
  if (name == "mu-eps" || name == "mu_eps") return Algorithm::mu_eps;
  if (name == "hals") return Algorithm::hals;
  if (name == "hals-eps" || name == "hals_eps") return Algorithm::hals_eps;
  constexpr std::string_view prefix = "factorwise:";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string_view r = name.substr(prefix.size());
    FactorwiseRule parsed;
    if (r == "mu_column" || r == "mu-column") parsed = FactorwiseRule::mu_column;
    else if (r == "nf_r1" || r == "nf-r1") parsed = FactorwiseRule::nf_r1;
    else if (r == "hals_opt" || r == "hals-opt" || r == "hals") parsed = FactorwiseRule::hals_opt;
    else return std::nullopt;
    if (rule != nullptr) *rule = parsed;
    return Algorithm::factorwise;
  }
  return std::nullopt;
}

/// Uniform (0,1] factors, V rescaled so that (V, W) is scaled against M.
inline FactorPair scaled_random_init(const RealMatrix& M, std::size_t rank, std::uint64_t seed,
                                     double lower_bound = 0.0) {
  Rng rng(seed);
  FactorPair F{random_positive(M.rows(), rank, rng), random_positive(rank, M.cols(), rng),
               lower_bound};
  const double alpha = optimal_scale(M, F);
  if (alpha > 0.0) scale_in_place(F.V, alpha);
  if (lower_bound > 0.0)
    for (double& x : F.V.values()) x = std::max(x, lower_bound);
  return F;
}

inline FactorPair apply_update(const RealMatrix& M, FactorPair F, const SolverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::mu: return mu_update(M, std::move(F));
    case Algorithm::mu_eps: return mu_eps_update(M, std::move(F), config.epsilon);
    case Algorithm::hals: return hals_sweep(M, std::move(F), 0.0);
    case Algorithm::hals_eps: return hals_sweep(M, std::move(F), config.epsilon);
    case Algorithm::factorwise: return factorwise_sweep(M, std::move(F), config.rule);
  }
  return F;
}

/// Runs the configured update from a seeded, scaled random start. Stops after
/// max_iters cycles or once kkt_residual drops below tol_kkt.
inline SolveResult solve(const RealMatrix& M, const SolverConfig& config) {
  detail::require(config.rank >= 1, ErrorCode::invalid_argument, "rank must be at least 1");
  detail::require(!uses_epsilon(config.algorithm) || config.epsilon > 0.0,
                  ErrorCode::invalid_argument, "epsilon must be positive");
  detail::require_nonnegative_target(M);

  SolveResult result;
  if (config.rank > std::min(M.rows(), M.cols())) {
    result.warnings.push_back("rank exceeds min(rows, cols)");
  }
  const double lb = uses_epsilon(config.algorithm) ? config.epsilon : 0.0;
  result.factors = scaled_random_init(M, config.rank, config.seed, lb);

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto record = [&](std::size_t iter) {
    if (!config.record_trace) return;
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
    result.trace.records.push_back({iter, frobenius_error(M, result.factors), elapsed});
  };
  record(0);

  for (std::size_t it = 1; it <= config.max_iters; ++it) {
    result.factors = apply_update(M, std::move(result.factors), config);
    result.iterations = it;
    record(it);
    if (config.tol_kkt > 0.0 && kkt_residual(M, result.factors, lb) < config.tol_kkt) {
      result.stationary = true;
      break;
    }
  }
  return result;
}

}  // namespace nmfkit
