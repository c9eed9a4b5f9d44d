#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nmfkit/nmfkit.hpp"

namespace {

using namespace nmfkit;

constexpr int exit_usage = 2;
constexpr int exit_file = 3;
constexpr int exit_solver = 4;

struct NmfOptions {
  std::string input;
  std::size_t rank = 1;
  std::string alg = "hals";
  std::size_t iters = 100;
  double eps = default_epsilon;
  std::uint64_t seed = 0;
  double tol_kkt = 0.0;
  std::string trace;
  std::string out_v;
  std::string out_w;
  bool no_timing = false;
};

struct BicliqueOptions {
  std::string input;
  std::string random;
  std::string alg = "mult";
  std::size_t runs = 1;
  std::size_t iters = 200;
  double d0 = 1.0;
  double alpha = 1.1;
  double ms_alpha = 1.05;
  std::uint64_t seed = 0;
  std::optional<double> dmax;
  std::string report;
  std::size_t jobs = 0;
};

bool is_file_error(const Error& e) {
  return e.code() == ErrorCode::io_error || e.code() == ErrorCode::parse_error;
}

int run_nmf(const NmfOptions& opt) {
  SolverConfig config;
  const auto alg = parse_algorithm(opt.alg, &config.rule);
  if (!alg) {
    std::cerr << "error: unknown algorithm '" << opt.alg << "'\n";
    return exit_usage;
  }
  config.algorithm = *alg;
  config.rank = opt.rank;
  config.epsilon = opt.eps;
  config.max_iters = opt.iters;
  config.seed = opt.seed;
  config.tol_kkt = opt.tol_kkt;

  RealMatrix M;
  try {
    M = read_matrix_file(opt.input);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_file;
  }

  SolveResult result;
  try {
    result = solve(M, config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_solver;
  }
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

  try {
    if (!opt.trace.empty()) {
      std::string csv = "iter,error,wall_seconds\n";
      for (const auto& r : result.trace.records) {
        csv += std::to_string(r.iter) + "," + detail::format_double(r.error) + "," +
               detail::format_double(opt.no_timing ? 0.0 : r.wall_seconds) + "\n";
      }
      write_text_file_atomic(opt.trace, csv);
    }
    if (!opt.out_v.empty()) write_matrix_file(opt.out_v, result.factors.V);
    if (!opt.out_w.empty()) write_matrix_file(opt.out_w, result.factors.W);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_file;
  }

  const double err = result.trace.records.empty() ? frobenius_error(M, result.factors)
                                                  : result.trace.records.back().error;
  std::cout << "iterations " << result.iterations << " error " << detail::format_double(err)
            << (result.stationary ? " stationary" : "") << "\n";
  return 0;
}

struct RunRow {
  std::size_t edges = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool converged = false;
  double density = 1.0;
};

std::optional<BipartiteGraph> load_graph(const BicliqueOptions& opt, int& code) {
  if (opt.input.empty() == opt.random.empty()) {
    std::cerr << "error: give exactly one of --input or --random\n";
    code = exit_usage;
    return std::nullopt;
  }
  if (!opt.random.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(opt.random);
    for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
    try {
      if (parts.size() != 3) throw Error(ErrorCode::parse_error, "expected m,n,density");
      const auto m = detail::parse_number<std::size_t>(parts[0], 1);
      const auto n = detail::parse_number<std::size_t>(parts[1], 1);
      const auto density = detail::parse_number<double>(parts[2], 1);
      return gen_random_bipartite(m, n, density, opt.seed);
    } catch (const Error& e) {
      std::cerr << "error: --random: " << e.what() << "\n";
      code = exit_usage;
      return std::nullopt;
    }
  }
  try {
    const auto g = parse_dimacs(read_text_file(opt.input));
    if (g.duplicates_removed > 0)
      std::cerr << "warning: " << g.duplicates_removed << " duplicate edges removed\n";
    return to_bipartite(g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = exit_file;
    return std::nullopt;
  }
}

int run_biclique(const BicliqueOptions& opt) {
  if (opt.alg != "mult" && opt.alg != "greedy" && opt.alg != "ms") {
    std::cerr << "error: unknown algorithm '" << opt.alg << "'\n";
    return exit_usage;
  }
  if (opt.runs == 0) {
    std::cerr << "error: --runs must be positive\n";
    return exit_usage;
  }
  int code = 0;
  const auto graph = load_graph(opt, code);
  if (!graph) return code;
  const BipartiteGraph& G = *graph;
  if (const auto r = G.isolated_rows().size(); r > 0)
    std::cerr << "warning: " << r << " isolated row vertices\n";
  if (const auto c = G.isolated_cols().size(); c > 0)
    std::cerr << "warning: " << c << " isolated column vertices\n";

  std::vector<RunRow> rows;
  try {
    rows = parallel_map(opt.runs, opt.jobs, [&](std::size_t run) {
      const std::uint64_t seed = opt.seed + run;
      RunRow row;
      if (opt.alg == "greedy") {
        const auto b = greedy_biclique(G);
        row = {b.edges(), b.rows.size(), b.cols.size(), true};
      } else if (opt.alg == "ms") {
        const auto b = motzkin_strauss_run(G, opt.ms_alpha, opt.ms_alpha, opt.iters, seed).biclique;
        row = {b.edges(), b.rows.size(), b.cols.size(), true};
      } else if (opt.dmax) {
        auto cfg = HomotopyConfig::bicluster(*opt.dmax, seed);
        cfg.d0 = opt.d0;
        cfg.alpha = opt.alpha;
        cfg.max_iters = opt.iters;
        const auto rep = bicluster_run(G, cfg);
        row = {rep.edges, rep.rows.size(), rep.cols.size(), rep.size > 0, rep.density};
      } else {
        HomotopyConfig cfg;
        cfg.d0 = opt.d0;
        cfg.alpha = opt.alpha;
        cfg.max_iters = opt.iters;
        cfg.seed = seed;
        const auto res = mbfa_run(G, cfg);
        row = {res.biclique.edges(), res.biclique.rows.size(), res.biclique.cols.size(),
               res.converged};
      }
      return row;
    });
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_solver;
  }

  const bool bicluster = opt.alg == "mult" && opt.dmax.has_value();
  std::string csv = bicluster ? "run_id,edges,rows,cols,converged,density\n"
                              : "run_id,edges,rows,cols,converged\n";
  double total = 0.0;
  std::size_t best = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    csv += std::to_string(k) + "," + std::to_string(r.edges) + "," + std::to_string(r.rows) + "," +
           std::to_string(r.cols) + "," + (r.converged ? "1" : "0");
    if (bicluster) csv += "," + detail::format_double(r.density);
    csv += "\n";
    total += static_cast<double>(r.edges);
    best = std::max(best, r.edges);
  }
  if (!opt.report.empty()) {
    try {
      write_text_file_atomic(opt.report, csv);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return exit_file;
    }
  }
  std::cout << "runs " << rows.size() << " mean "
            << detail::format_double(total / static_cast<double>(rows.size())) << " best " << best
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonnegative factorization and biclique tools"};
  app.require_subcommand(1);

  NmfOptions nmf;
  auto* nmf_cmd = app.add_subcommand("nmf", "Factorize a matrix file");
  nmf_cmd->add_option("--input", nmf.input, "Matrix file")->required();
  nmf_cmd->add_option("--rank", nmf.rank, "Factorization rank")->check(CLI::PositiveNumber);
  nmf_cmd->add_option("--alg", nmf.alg, "mu | mu-eps | hals | hals-eps | factorwise:<rule>");
  nmf_cmd->add_option("--iters", nmf.iters, "Number of update cycles");
  nmf_cmd->add_option("--eps", nmf.eps, "Lower bound for the -eps variants")
      ->check(CLI::PositiveNumber);
  nmf_cmd->add_option("--seed", nmf.seed, "Seed of the random start");
  nmf_cmd->add_option("--tol-kkt", nmf.tol_kkt, "Stop once the KKT residual is below this");
  nmf_cmd->add_option("--trace", nmf.trace, "CSV trace path");
  nmf_cmd->add_option("--out-v", nmf.out_v, "Output path for V");
  nmf_cmd->add_option("--out-w", nmf.out_w, "Output path for W");
  nmf_cmd->add_flag("--no-timing", nmf.no_timing, "Write 0 in the wall_seconds column");

  BicliqueOptions bic;
  auto* bic_cmd = app.add_subcommand("biclique", "Search for large bicliques");
  bic_cmd->add_option("--input", bic.input, "DIMACS graph file");
  bic_cmd->add_option("--random", bic.random, "Random bipartite graph m,n,density");
  bic_cmd->add_option("--alg", bic.alg, "mult | greedy | ms");
  bic_cmd->add_option("--runs", bic.runs, "Number of seeded runs");
  bic_cmd->add_option("--iters", bic.iters, "Iterations per run");
  bic_cmd->add_option("--d0", bic.d0, "Initial penalty d");
  bic_cmd->add_option("--alpha", bic.alpha, "Growth factor of d");
  bic_cmd->add_option("--ms-alpha", bic.ms_alpha, "Exponent of the Motzkin-Strauss constraint");
  bic_cmd->add_option("--seed", bic.seed, "Base seed; run k uses seed + k");
  bic_cmd->add_option("--dmax", bic.dmax, "Cap on d (bicluster mode)");
  bic_cmd->add_option("--report", bic.report, "CSV report path");
  bic_cmd->add_option("--jobs", bic.jobs, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  try {
    if (*nmf_cmd) return run_nmf(nmf);
    return run_biclique(bic);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_file_error(e) ? exit_file : exit_solver;
  }
}
