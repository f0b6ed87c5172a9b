#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "oldcong/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = oldcong::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string curve(unsigned n) { return (testutil::data_dir() / ("curve" + std::to_string(n) + ".json")).string(); }

}  // namespace

TEST(Cli, SturmBound) {
  const auto r = run({"sturm-bound", "42"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "13\n");
}

TEST(Cli, Basis) {
  auto r = run({"basis", "22", "--prec", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1 0 -1 -2\n0 1 0 -2\n");
  r = run({"basis", "42", "--prec", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Sturm bound"), std::string::npos);
  EXPECT_EQ(run({"basis", "11"}).out, "1\n");
}

TEST(Cli, OldspaceMatrix) {
  const auto r = run({"oldspace-matrix", "22"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "# level 22, precision 4, 2 rows\nbeta_1 from 11: 1 -2 -1 2\nbeta_2 from 11: 0 1 0 -2\n");
}

TEST(Cli, CheckPrime) {
  auto r = run({"check-prime", "--curve", curve(11), "-p", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "no\n");
  r = run({"check-prime", "--curve", curve(42), "-p", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("yes\nv(f) == ", 0), 0u);
  EXPECT_EQ(run({"check-prime", "--curve", curve(42), "-p", "4"}).code, 2);
}

TEST(Cli, CongruencePrimes) {
  auto r = run({"congruence-primes", "--curve", curve(11)});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("congruence primes: none"), std::string::npos);

  r = run({"congruence-primes", "--curve", curve(33), "--method", "both", "--json", "-"});
  EXPECT_EQ(r.code, 0);
  const auto brace = r.out.find('{');
  ASSERT_NE(brace, std::string::npos);
  const auto j = nlohmann::json::parse(r.out.substr(brace));
  EXPECT_EQ(j["congruence_primes"], nlohmann::json::array({3}));
  EXPECT_EQ(j["method"], "both");

  EXPECT_EQ(run({"congruence-primes", "--curve", curve(33), "--method", "magic"}).code, 2);
}

TEST(Cli, DeterministicOutput) {
  const auto a = run({"congruence-primes", "--curve", curve(57), "--method", "both", "--json", "-"});
  const auto b = run({"congruence-primes", "--curve", curve(57), "--method", "both", "--json", "-"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CongruenceNumber) {
  const auto r = run({"congruence-number", "--curve", curve(42)});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "4\n");
}

TEST(Cli, CheckConjecture1) {
  auto r = run({"check-conjecture1", "--curve", curve(14)});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ell=3: consistent (divides torsion order 6)\n");
  r = run({"check-conjecture1", "--curve", curve(37)});
  EXPECT_EQ(r.out, "no odd prime divides the Tamagawa product\n");
}

TEST(Cli, ErrorsAndExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  const auto unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"sturm-bound", "42", "--bogus"}).code, 2);
  EXPECT_EQ(run({"sturm-bound", "0"}).code, 2);
  EXPECT_EQ(run({"congruence-primes", "--curve", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DegenerateLevelIsMathematicalRejection) {
  const auto path = std::filesystem::temp_directory_path() / "oldcong_level10.json";
  std::ofstream(path) << R"({"level":10,"ainvs":[0,-1,1,-10,-20]})";
  const auto r = run({"congruence-primes", "--curve", path.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no cusp forms"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, UnknownKeysWarnOnStderr) {
  const auto path = std::filesystem::temp_directory_path() / "oldcong_extra.json";
  std::ofstream(path) << R"({"level":11,"ainvs":[0,-1,1,-10,-20],"rank":0})";
  const auto r = run({"congruence-primes", "--curve", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("rank"), std::string::npos);
  std::filesystem::remove(path);
}
