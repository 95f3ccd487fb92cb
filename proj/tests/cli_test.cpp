#include "support/support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace fpvc::test;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / ("fpvc_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

CliRun run(const std::string& args) {
  auto log = scratch() / "out.txt";
  std::string cmd = std::string(FPVC_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  r.out.assign(std::istreambuf_iterator<char>(in), {});
  return r;
}

std::string corpus(const std::string& name) { return corpus_path(name); }

}  // namespace

TEST(Cli, MutantGivesCertifiedCounterexample) {
  CliRun r = run("prove " + corpus("taylor_sin_plus.nvc"));
  EXPECT_EQ(r.code, 10) << r.out;
  EXPECT_NE(r.out.find("x=-0.25"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("certified"), std::string::npos);
}

TEST(Cli, MissingFileIsAnInputError) {
  CliRun r = run("prove /nonexistent/file.nvc");
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST(Cli, MalformedInputIsAnInputError) {
  auto bad = scratch() / "bad.nvc";
  std::ofstream(bad) << "x (real)\nassert (<= x 1\n";
  EXPECT_EQ(run("prove " + bad.string()).code, 2);
}

TEST(Cli, ProvedExitsZero) {
  CliRun r = run("prove " + corpus("heron_init.nvc"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("Proved"), std::string::npos);
}

TEST(Cli, InjectedBoundsProveTaylorSin) {
  CliRun r = run("prove " + corpus("taylor_sin.nvc") +
              " --inject-bound 952ebceee1a17fdc=1.769513e-8 0c56e6c20c61df4a=1.769513e-8 --timeout 120");
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, GaveUpExitsTwenty) {
  CliRun r = run("prove " + corpus("approx_sin_le.nvc") + " --timeout 1");
  EXPECT_EQ(r.code, 20) << r.out;
}

TEST(Cli, BoundsOfApproxSin) {
  CliRun r = run("bounds " + corpus("approx_sin_le.nvc"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("x (real) ∈ [-6851933/8388608, 6851933/8388608]"), std::string::npos) << r.out;
}

TEST(Cli, BoundsOfQuadrantCounter) {
  CliRun r = run("bounds " + corpus("sin_ge.nvc"));
  EXPECT_NE(r.out.find("r1 (int) ∈ [0, 511]"), std::string::npos) << r.out;
}

TEST(Cli, UnboundedVariableWarns) {
  auto f = scratch() / "free.nvc";
  std::ofstream(f) << "x (real)\ny (real)\nassert (<= 0 x)\nassert (<= x 1)\nassert (<= (* y y) (+ y 3))\n";
  CliRun r = run("bounds " + f.string());
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("y (real) ∈ (-∞, ∞)"), std::string::npos) << r.out;
}

TEST(Cli, ProcessPrintsContextsAndExports) {
  CliRun r = run("process " + corpus("taylor_sin.nvc") + " --emit fptaylor dreal metitarski");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("952ebceee1a17fdc"), std::string::npos);
  EXPECT_NE(r.out.find("x (real) ∈ [-0.5, 0.5]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("Expressions"), std::string::npos);
  EXPECT_NE(r.out.find("(set-logic QF_NRA)"), std::string::npos);
  EXPECT_NE(r.out.find("fof(nvc, conjecture"), std::string::npos);
}

TEST(Cli, ProcessWritesFilesToTheOutputDirectory) {
  auto dir = scratch() / "outdir";
  std::filesystem::remove_all(dir);
  CliRun r = run("process " + corpus("heron_init.nvc") + " --emit dreal -o " + dir.string());
  EXPECT_EQ(r.code, 0) << r.out;
  int files = 0;
  if (std::filesystem::exists(dir))
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  EXPECT_GE(files, 2);
}

TEST(Cli, JsonReport) {
  auto rep = scratch() / "report.json";
  CliRun r = run("prove " + corpus("taylor_sin_swap.nvc") + " --report " + rep.string());
  EXPECT_EQ(r.code, 10);
  std::ifstream in(rep);
  nlohmann::json j = nlohmann::json::parse(in);
  EXPECT_EQ(j["verdict"], "PotentialCounterexample");
  EXPECT_EQ(j["certified"], true);
  EXPECT_EQ(j["actual"], true);
  EXPECT_EQ(j["point"]["x"]["exact"], "0");
  EXPECT_EQ(j["contexts"].size(), 3u);
  EXPECT_EQ(j["exit_code"], 10);
}

TEST(Cli, ConfigFileOverridesDefaults) {
  auto cfg = scratch() / "fpvc.conf";
  std::ofstream(cfg) << "# tiny budget\ntimeout = 0.2\nmax_depth = 5\n";
  CliRun r = run("prove " + corpus("taylor_sin_loose.nvc") + " --config " + cfg.string());
  EXPECT_EQ(r.code, 20) << r.out;
}

TEST(Cli, SeveralFilesCombineExitCodes) {
  CliRun r = run("prove " + corpus("heron_init.nvc") + " " + corpus("taylor_sin_plus.nvc"));
  EXPECT_EQ(r.code, 10) << r.out;
}

TEST(Cli, UnknownOptionIsAnInputError) { EXPECT_EQ(run("prove --frobnicate").code, 2); }
