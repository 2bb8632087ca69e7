#include <sstream>

#include <gtest/gtest.h>

#include "osa/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string data(const std::string& rel) { return std::string(OSA_DATA_DIR) + "/" + rel; }

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "osa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = osa::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ChromaticK3) {
  const auto r = run({"chromatic", data("graphs/k3.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "t^3 - 3t^2 + 2t\n");
}

TEST(Cli, ZaslavskyCoordinatePlanes) {
  const auto r = run({"zaslavsky", data("arrangements/coords3.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "f = (1, 6, 12, 8)\n");
}

TEST(Cli, BettiCP1K2) {
  const auto r = run({"betti", data("manifolds/cp1.json"), data("graphs/k2.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Betti (1,0,1)\n"), std::string::npos);
  EXPECT_NE(r.out.find("collapse: guaranteed"), std::string::npos);
  EXPECT_NE(r.out.find("degree 2 weight 2: 1"), std::string::npos);
}

TEST(Cli, PolynomialCommands) {
  EXPECT_EQ(run({"poincare-z2", data("manifolds/r2.json"), data("graphs/k3.json")}).out, "1 + 3t + 2t^2\n");
  EXPECT_EQ(run({"complex-poincare", data("arrangements/braid3.json")}).out, "1 + 3t + 2t^2\n");
  EXPECT_EQ(run({"e1-poly", data("manifolds/r2.json"), data("graphs/k2.json")}).out, "1 + s^-1t^2\n");
  EXPECT_EQ(run({"zaslavsky", data("arrangements/lines4.json")}).out, "f = (1, 8, 8)\n");
}

TEST(Cli, OsDimsOnGraphAndArrangement) {
  const auto g = run({"os-dims", data("graphs/k3.json")});
  EXPECT_NE(g.out.find("by degree: (1,3,2)"), std::string::npos);
  const auto a = run({"os-dims", data("arrangements/braid3.json")});
  EXPECT_NE(a.out.find("total: 6"), std::string::npos);
}

TEST(Cli, PresentationLabelsRing) {
  const auto r = run({"presentation", data("manifolds/r2.json"), data("graphs/k3.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("cycle relations: 1"), std::string::npos);
  EXPECT_NE(r.out.find("ring: cohomology ring"), std::string::npos);
  const auto s = run({"presentation", data("manifolds/s1xr.json"), data("graphs/k3.json")});
  EXPECT_NE(s.out.find("ring: associated graded"), std::string::npos);
}

TEST(Cli, GenericE2) {
  const auto r = run({"e2", data("generic/k3_lattice.json"), data("generic/top_only.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "E2 (-2,2): 2\npoincare: 2\n");
  EXPECT_EQ(run({"e2", "--field", "GF2", data("generic/k3_lattice.json"), data("generic/constant.json")}).out,
            "poincare: 0\n");
}

TEST(Cli, JsonFormat) {
  const auto r = run({"--format", "json", "betti", data("manifolds/elliptic.json"), data("graphs/k2.json")});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("betti"), (std::vector<long>{1, 4, 5, 2}));
  EXPECT_EQ(j.at("collapse"), "guaranteed");
  const auto z = nlohmann::json::parse(run({"--format", "json", "zaslavsky", data("arrangements/coords3.json")}).out);
  EXPECT_EQ(z.at("f"), (std::vector<long>{1, 6, 12, 8}));
}

TEST(Cli, OutputIsDeterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"betti", data("manifolds/s1.json"), data("graphs/k3.json")},
           {"--format", "json", "bond-lattice", data("graphs/c4.json")},
           {"check", "--suite", "zaslavsky"}})
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, ValidationFailuresExitTwo) {
  const auto r = run({"poincare-z2", data("manifolds/s1.json"), data("graphs/k2.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("validation failed"), std::string::npos);
  EXPECT_EQ(run({"e2", data("generic/k3_lattice.json"), data("graphs/k3.json")}).code, 2);
  EXPECT_EQ(run({"--max-lattice", "3", "bond-lattice", data("graphs/k3.json")}).code, 2);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"chromatic"}).code, 1);
  EXPECT_EQ(run({"--colour", "red", "chromatic", data("graphs/k3.json")}).code, 1);
  EXPECT_EQ(run({"--field", "R", "chromatic", data("graphs/k3.json")}).code, 1);
  EXPECT_EQ(run({"chromatic", data("graphs/missing.json")}).code, 1);
  EXPECT_EQ(run({"check", "--suite", "nonexistent"}).code, 1);
}

TEST(Cli, CheckSuite) {
  const auto r = run({"check", "--suite", "classical"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "PASS classical: 10 cases\n");
  EXPECT_EQ(run({"check", "--suite", "11"}).code, 0);
}
