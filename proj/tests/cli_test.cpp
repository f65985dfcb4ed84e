#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace behametric;

namespace {

std::string data(const std::string& file) { return std::string(BEHAMETRIC_DATA_DIR) + "/" + file; }

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, std::optional<std::string> env = std::nullopt) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err, env);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, DistExactReproducesTheKnownValue) {
  Result r = run({"dist", data("probabilistic_example.json"), "--c", "9/10", "--eps", "1/20", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("state,x,y,u,z\n"), std::string::npos);
  EXPECT_NE(r.out.find("x,0,9/200,99/200,1\n"), std::string::npos);
}

TEST(Cli, LiftBothShowsTheGap) {
  Result r = run({"lift", data("counterexample.json"), "--both"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "kantorovich 0\nwasserstein 2\ngap 2\n");
  Result single = run({"lift", data("counterexample.json"), "--method", "kantorovich", "--exact"});
  EXPECT_EQ(single.out, "0\n");
  Result override = run({"lift", data("counterexample.json"), "--exact", "--t2", R"(["x1","x2"])"});
  EXPECT_EQ(override.out, "0\n");
}

TEST(Cli, CheckPassesAndReportsSuites) {
  Result r = run({"check", "duality", "--seed", "7", "--n", "40"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("duality: PASS"), std::string::npos);
  Result wb = run({"check", "well-behaved", "--n", "40", "--exact"});
  EXPECT_EQ(wb.code, 0) << wb.out;
  EXPECT_NE(wb.out.find("condition 2 fails at {(0,1),(1,1)}"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"dist", data("missing.json")}).code, 1);
  Result bad_param = run({"dist", data("probabilistic_example.json"), "--c", "3/2"});
  EXPECT_EQ(bad_param.code, 1);
  EXPECT_NE(bad_param.err.find("$.discount"), std::string::npos);
  EXPECT_EQ(run({"dist", data("probabilistic_example.json"), "--exact", "--float", "1e-6"}).code, 1);
  EXPECT_EQ(run({"check", "no-such-suite"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  Result capped = run({"dist", data("probabilistic_example.json"), "--exact", "--max-iter", "2", "--strict"});
  EXPECT_EQ(capped.code, 3);
  EXPECT_NE(capped.err.find("no convergence"), std::string::npos);
  EXPECT_EQ(run({"dist", data("probabilistic_example.json"), "--exact", "--max-iter", "2"}).code, 0);
  EXPECT_EQ(run({"dist", "--help"}).code, 0);
}

TEST(Cli, JsonOutputRoundTrips) {
  Result r = run({"dist", data("metric_example.json"), "--exact", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  DistanceMatrix m = io::matrix_from_json(io::json::parse(r.out));
  EXPECT_EQ(io::matrix_to_csv(m), run({"dist", data("metric_example.json"), "--exact"}).out);
  EXPECT_TRUE(m.converged);
}

TEST(Cli, OutputIsDeterministicAcrossThreadCounts) {
  Result a = run({"dist", data("probabilistic_example.json"), "--threads", "1"});
  Result b = run({"dist", data("probabilistic_example.json"), "--threads", "4"});
  Result c = run({"dist", data("probabilistic_example.json")}, "3");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_EQ(run({"dist", data("probabilistic_example.json")}, "many").code, 1);
  EXPECT_EQ(run({"check", "axioms", "--n", "10", "--seed", "4"}).out, run({"check", "axioms", "--n", "10", "--seed", "4"}).out);
}

TEST(Cli, TraceListsEveryIterate) {
  Result r = run({"trace", data("probabilistic_example.json"), "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iteration,delta,state,x,y,u,z");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3u * 4u);
  EXPECT_NE(r.out.find("3,0,x,0,9/200,99/200,1"), std::string::npos);
}

TEST(Cli, OutWritesAFile) {
  auto path = std::filesystem::temp_directory_path() / "behametric_cli_test.csv";
  Result r = run({"dist", data("generic_system.json"), "--exact", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(content.str(), "state,a,b,c\na,0,1/8,1/2\nb,1/8,0,1/2\nc,1/2,1/2,0\n");
  std::filesystem::remove(path);
}
