#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "nmfkit/graph_io.hpp"
#include "support/instances.hpp"

using namespace nmfkit;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nmfkit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  /// Runs the tool with stdout and stderr captured into files; returns the exit status.
  int run(const std::string& args) {
    const std::string cmd = std::string(NMFKIT_CLI_PATH) + " " + args + " > " +
                            path("stdout").string() + " 2> " + path("stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return read_text_file(path("stdout")); }
  std::string err() const { return read_text_file(path("stderr")); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, NmfOnOnesConverges) {
  write_matrix_file(path("ones.txt"), RealMatrix::ones(4, 4));
  ASSERT_EQ(run("nmf --input " + path("ones.txt").string() + " --rank 1 --alg hals --iters 20 --out-v " +
                path("v.txt").string() + " --out-w " + path("w.txt").string()),
            0)
      << err();
  const RealMatrix V = read_matrix_file(path("v.txt"));
  const RealMatrix W = read_matrix_file(path("w.txt"));
  double err2 = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) err2 += (1.0 - V(i, 0) * W(0, j)) * (1.0 - V(i, 0) * W(0, j));
  EXPECT_LT(err2, 1e-8);
}

TEST_F(Cli, TraceIsDeterministic) {
  Rng rng(3);
  write_matrix_file(path("m.txt"), random_positive(10, 8, rng));
  const std::string base = "nmf --input " + path("m.txt").string() +
                           " --rank 3 --alg mu --iters 30 --seed 5 --no-timing --trace ";
  ASSERT_EQ(run(base + path("a.csv").string()), 0) << err();
  ASSERT_EQ(run(base + path("b.csv").string()), 0) << err();
  const std::string a = read_text_file(path("a.csv"));
  EXPECT_EQ(a, read_text_file(path("b.csv")));
  EXPECT_EQ(a.substr(0, a.find('\n')), "iter,error,wall_seconds");
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 32);
}

TEST_F(Cli, MixedSignInputIsSolverError) {
  write_matrix_file(path("m.txt"), RealMatrix{{1, -1}, {2, 3}});
  EXPECT_EQ(run("nmf --input " + path("m.txt").string() + " --alg mu"), 4);
  EXPECT_NE(err().find("nonnegativity"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("nmf --input " + path("missing.txt").string()), 3);
  EXPECT_EQ(run("nmf --input x --rank zero"), 2);
  EXPECT_EQ(run("nmf"), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  write_matrix_file(path("m.txt"), RealMatrix::ones(2, 2));
  EXPECT_EQ(run("nmf --input " + path("m.txt").string() + " --alg bogus"), 2);
  write_text_file_atomic(path("bad.txt"), "2 2 dense\n1 2 3\n");
  EXPECT_EQ(run("nmf --input " + path("bad.txt").string()), 3);
  EXPECT_EQ(run("biclique --alg greedy"), 2);
  EXPECT_EQ(run("biclique --random 10,10 --alg greedy"), 2);
  EXPECT_EQ(run("biclique --random 10,10,0.5 --alg nope"), 2);
  EXPECT_EQ(run("biclique --input " + path("missing.clq").string()), 3);
  EXPECT_EQ(err().find("run_id"), std::string::npos);
}

TEST_F(Cli, GreedyOnRandomGraph) {
  ASSERT_EQ(run("biclique --random 100,100,0.9 --alg greedy --runs 1 --report " +
                path("r.csv").string()),
            0)
      << err();
  const std::string csv = read_text_file(path("r.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "run_id,edges,rows,cols,converged");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  const auto row = csv.substr(csv.find('\n') + 1);
  const std::size_t edges = std::stoul(row.substr(row.find(',') + 1));
  EXPECT_GT(edges, 600u);
  EXPECT_LT(edges, 1100u);
}

TEST_F(Cli, JohnsonGraphFromFile) {
  write_text_file_atomic(path("john.clq"), "c johnson8-2-4\n" + write_dimacs(instances::johnson_8_2_4()));
  ASSERT_EQ(run("biclique --input " + path("john.clq").string() +
                " --alg mult --runs 100 --iters 200 --d0 1 --alpha 1.1 --report " +
                path("r.csv").string()),
            0)
      << err();
  EXPECT_NE(out().find("best 36"), std::string::npos) << out();
  ASSERT_EQ(run("biclique --input " + path("john.clq").string() + " --alg greedy"), 0);
  EXPECT_NE(out().find("best 36"), std::string::npos) << out();
}

TEST_F(Cli, ReportIndependentOfJobCount) {
  const std::string base = "biclique --random 40,40,0.5 --alg mult --runs 8 --seed 3 --report ";
  ASSERT_EQ(run(base + path("one.csv").string() + " --jobs 1"), 0) << err();
  ASSERT_EQ(run(base + path("four.csv").string() + " --jobs 4"), 0) << err();
  EXPECT_EQ(read_text_file(path("one.csv")), read_text_file(path("four.csv")));
}

TEST_F(Cli, DuplicateAndIsolatedWarnings) {
  write_text_file_atomic(path("g.clq"), "p edge 4 2\ne 1 2\ne 2 1\n");
  ASSERT_EQ(run("biclique --input " + path("g.clq").string() + " --alg greedy"), 0);
  EXPECT_NE(err().find("duplicate"), std::string::npos);
  EXPECT_NE(err().find("isolated"), std::string::npos);
}

TEST_F(Cli, BiclusterAndMotzkinStrauss) {
  ASSERT_EQ(run("biclique --random 30,30,0.3 --alg mult --dmax 0.5 --runs 2 --report " +
                path("b.csv").string()),
            0)
      << err();
  const std::string csv = read_text_file(path("b.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "run_id,edges,rows,cols,converged,density");
  ASSERT_EQ(run("biclique --random 30,30,0.5 --alg ms --ms-alpha 1.05 --runs 3"), 0) << err();
  EXPECT_NE(out().find("runs 3"), std::string::npos);
}
