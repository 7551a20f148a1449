#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dstk/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dstk::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

}  // namespace

TEST(Cli, GenTest) {
  const auto r = run({"gen-test", "--max-q", "6"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("6\t000000\t100000\n"), std::string::npos);
  EXPECT_EQ(r.out.substr(0, 6), "0\t-\t-\n");
}

TEST(Cli, CheckTestCanonicalAndFile) {
  EXPECT_EQ(run({"check-test", "--max-q", "64"}).code, 0);
  const std::string path = temp_path("broken_test.tsv");
  {
    std::ofstream f(path);
    f << "0\t-\t-\n1\t0\t1\n2\t11\t11\n";
  }
  const auto r = run({"check-test", "--test", path, "--p-max", "0", "--m-max", "0", "--u-max", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("WITNESS: clause c"), std::string::npos);
  EXPECT_EQ(run({"check-test"}).code, 2);
  EXPECT_EQ(run({"check-test", "--test", temp_path("missing.tsv")}).code, 2);
}

TEST(Cli, LevelCommands) {
  const auto s = run({"slice", "--p", "2"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("00\t11\n"), std::string::npos);
  EXPECT_NE(s.out.find("# 3 pairs"), std::string::npos);
  const auto d = run({"graph-dot", "--level", "2"});
  EXPECT_EQ(d.code, 0);
  EXPECT_NE(d.out.find("\"L_00\" -- \"R_11\";"), std::string::npos);
  EXPECT_EQ(run({"check-acyclic", "--max-level", "12"}).code, 0);
  EXPECT_EQ(run({"rect-free", "--max-level", "8"}).code, 0);
}

TEST(Cli, Hierarchy) {
  const auto h = run({"h-member", "--xi", "1", "--seq", "0:-"});
  EXPECT_EQ(h.code, 1);
  EXPECT_EQ(h.out.substr(0, 6), "false\n");
  EXPECT_NE(h.out.find("WITNESS:"), std::string::npos);
  EXPECT_EQ(run({"h-member", "--xi", "1", "--seq", "1:-"}).code, 0);
  const auto r = run({"rho", "--xi", "1", "--seq", "0:1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 4), "1:0\n");
  EXPECT_EQ(run({"rho", "--xi", "omega", "--seq", "0:-"}).code, 3);
  EXPECT_EQ(run({"rho", "--xi", "omega:1,2", "--seq", "0:-"}).code, 0);
  EXPECT_EQ(run({"rho", "--xi", "banana", "--seq", "0:-"}).code, 2);
  EXPECT_EQ(run({"s-member", "--xi", "1", "--alpha", "0:0", "--beta", "0:1"}).code, 0);
  EXPECT_EQ(run({"s-member", "--xi", "0", "--alpha", "0:0", "--beta", "0:1"}).code, 1);
  EXPECT_EQ(run({"s-member", "--xi", "1", "--alpha", "0:-", "--beta", "1:-"}).code, 3);
}

TEST(Cli, Reduction) {
  const auto r = run({"reduce", "--ranks", "3", "--alpha0", "9"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1\t0\t-\t0^7\t9\n"), std::string::npos);
  EXPECT_NE(r.out.find("alpha0 "), std::string::npos);
  const auto one = run({"reduce", "--oracle", "one", "--ranks", "1"});
  EXPECT_NE(one.out.find("0\t-\t1\t0^19\t21\n"), std::string::npos);
  EXPECT_EQ(run({"reduce", "--oracle", "nope"}).code, 2);
  EXPECT_EQ(run({"verify-l34", "--oracle", "one"}).code, 0);
  EXPECT_EQ(run({"verify-t35", "--xi", "2", "--alpha", "0:0110"}).code, 0);
  EXPECT_EQ(run({"verify-t35", "--xi", "1", "--alpha", "1:-"}).code, 2);
}

TEST(Cli, SelectorDemo) {
  const auto a = run({"selector-demo", "--seed", "2"});
  const auto b = run({"selector-demo", "--seed", "2"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(a.code == 0 || a.code == 1);
  if (a.code == 1) { EXPECT_NE(a.out.find("WITNESS:"), std::string::npos); }
}

TEST(Cli, RelCheck) {
  const auto ok = run({"rel-check", "--depth", "4", "--rel", "builtin:extension", "--rel", "builtin:ones", "--z", "011"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("enumeration (0,01) (1,0)"), std::string::npos);
  const auto bad = run({"rel-check", "--depth", "3", "--rel", "builtin:closed-zeros"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("WITNESS: stage 0 clause (a)"), std::string::npos);
  const auto mono = run({"rel-check", "--rel", "builtin:extension", "--rel", "builtin:ones", "--rel", "builtin:extension"});
  EXPECT_EQ(mono.code, 1);
  EXPECT_EQ(run({"rel-check", "--rel", "builtin:extension", "--rel", "builtin:ones", "--top", "builtin:ones", "--eta", "1"}).code,
            0);
  EXPECT_EQ(run({"rel-check", "--rel", "builtin:extension", "--top", "builtin:extension", "--eta", "0"}).code, 2);

  const std::string path = temp_path("rel.tsv");
  {
    std::ofstream f(path);
    f << "-\t-\n";
  }
  EXPECT_EQ(run({"rel-check", "--depth", "0", "--rel", path}).code, 0);
  EXPECT_EQ(run({"rel-check", "--depth", "1", "--rel", path}).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"gen-test", "--max-q", "6", "--bogus"}).code, 2);
  EXPECT_EQ(run({"gen-test"}).code, 2);
  EXPECT_EQ(run({"gen-test", "--max-q", "-3"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"gen-test", "--max-q", "100000000"}).code, 2);
}
