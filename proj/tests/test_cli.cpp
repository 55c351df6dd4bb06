#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cotorsion/cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cotorsion");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = cotorsion::run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string corpus(const std::string& name) { return std::string(CORPUS_DIR) + "/" + name + ".json"; }

}  // namespace

TEST(Cli, LocalizeFx2) {
  auto r = run({"localize", "--input", corpus("fx2"), "--acyclics", "projectives", "--dim-bound", "4"});
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = r.report();
  EXPECT_EQ(j["verdict"], "exact");
  EXPECT_EQ(j["cokernel"], "Z/2");
}

TEST(Cli, LocalizeFx3) {
  auto r = run({"localize", "--input", corpus("fx3"), "--acyclics", "projectives", "--dim-bound", "4"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report()["cokernel"], "Z/3");
}

TEST(Cli, WeqMultiplicationByX) {
  auto r = run({"weq", "--input", corpus("fx2"), "--map", "mul_x"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report()["verdict"], "yes");
}

TEST(Cli, WeqSocleIsNo) {
  auto r = run({"weq", "--input", corpus("fx2"), "--map", "soc"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report()["verdict"], "no");
}

TEST(Cli, ValidateBrokenFails) {
  auto r = run({"validate", "--input", corpus("broken")});
  EXPECT_EQ(r.code, 1);
  auto j = r.report();
  ASSERT_TRUE(j.contains("failures")) << r.out;
  EXPECT_FALSE(j["failures"].empty());
}

TEST(Cli, EveryCorpusFileValidates) {
  for (auto name : {"fx2", "fx3", "f2c2", "quiver_a1", "quiver_a2", "hereditary"}) {
    auto r = run({"validate", "--input", corpus(name)});
    EXPECT_EQ(r.code, 0) << name << "\n" << r.out;
  }
}

TEST(Cli, ExtSimpleBySimple) {
  auto r = run({"ext", "--input", corpus("fx2"), "--c", "S", "--a", "S"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.report()["dimension"], 1);
}

TEST(Cli, ChainQuasiIso) {
  auto r = run({"chain", "--input", corpus("fx2"), "--op", "qiso", "--map", "soc_in"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report()["is_quasi_iso"], false);
  EXPECT_EQ(r.report()["agree"], true);
}

TEST(Cli, AxiomsPassOnFx2) {
  auto r = run({"axioms", "--input", corpus("fx2"), "--samples", "10"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.report()["total_fail"], 0);
}

TEST(Cli, BudgetExceededExitsTwo) {
  auto r = run({"enumerate", "--input", corpus("fx2"), "--dim-bound", "6", "--budget", "10"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.report()["error"]["kind"], "budget_exceeded");
}

TEST(Cli, MalformedInputsExitThree) {
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"no-such-command"}).code, 3);
  EXPECT_EQ(run({"validate", "--input", "/nonexistent/file.json"}).code, 3);
  EXPECT_EQ(run({"weq", "--input", corpus("fx2"), "--map", "no_such_map"}).code, 3);
  EXPECT_EQ(run({"validate", "--input", corpus("fx2"), "--format", "xml"}).code, 3);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"axioms", "--input", corpus("fx2"), "--samples", "5", "--seed", "42"};
  auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
  auto c = run({"localize", "--input", corpus("fx3"), "--acyclics", "projectives"});
  EXPECT_EQ(c.out, run({"localize", "--input", corpus("fx3"), "--acyclics", "projectives"}).out);
}

TEST(Cli, SeedChangesSampling) {
  auto a = run({"axioms", "--input", corpus("fx2"), "--samples", "5", "--seed", "1"});
  auto b = run({"axioms", "--input", corpus("fx2"), "--samples", "5", "--seed", "2"});
  EXPECT_EQ(a.report()["seed"], 1);
  EXPECT_EQ(b.report()["seed"], 2);
}

TEST(Cli, TextFormat) {
  auto r = run({"weq", "--input", corpus("fx2"), "--map", "mul_x", "--format", "text"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("yes"), std::string::npos);
}
