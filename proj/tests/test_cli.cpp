#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "hyplevy/cli.hpp"
#include "support.hpp"

using namespace hyplevy;
using namespace hyplevy::cli;
using namespace fixtures;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_config(const RunConfig& c) {
  std::ostringstream out, err;
  const int s = run(c, out, err);
  return {s, out.str(), err.str()};
}

RunConfig config(Subcommand s, const HypParams& p) {
  RunConfig c;
  c.subcommand = s;
  c.params = p;
  return c;
}

TEST(Run, ValidateA1) {
  const auto o = run_config(config(Subcommand::Validate, kA1));
  ASSERT_EQ(o.status, kExitOk) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  ASSERT_EQ(j["data"].size(), 1u);
  EXPECT_EQ(j["data"][0]["regime"], "A1");
  EXPECT_EQ(j["data"][0]["n"], 0);
  EXPECT_NEAR(j["data"][0]["eta"].get<double>(), 1.1, 1e-12);
  EXPECT_NEAR(j["data"][0]["q"].get<double>(), 0.060435555913883812024, 1e-14);
  EXPECT_EQ(j["meta"]["version"], kVersion);
}

TEST(Run, ValidateRegimeShift) {
  const auto j = nlohmann::json::parse(run_config(config(Subcommand::Validate, kA4)).out);
  EXPECT_EQ(j["data"][0]["regime"], "A4");
  EXPECT_EQ(j["data"][0]["n"], 2);
}

TEST(Run, DomainErrorIsReported) {
  const auto o = run_config(config(Subcommand::Validate, {0.9, 1.5, 0.2, 0.3}));
  EXPECT_EQ(o.status, kExitDomain);
  EXPECT_EQ(o.err, "error: gamma out of (0,1)\n");
  EXPECT_TRUE(o.out.empty());
}

TEST(Run, CheckOnWorkedExamples) {
  for (const auto& p : worked()) {
    const auto o = run_config(config(Subcommand::Check, p));
    EXPECT_EQ(o.status, kExitOk) << p.beta << o.out;
    const auto j = nlohmann::json::parse(o.out);
    for (const auto& [name, c] : j["checks"].items()) EXPECT_TRUE(c["passed"].get<bool>()) << name;
  }
}

TEST(Run, MisprintedA3IsRejected) {
  const auto o = run_config(config(Subcommand::Check, kA3Misprint));
  EXPECT_EQ(o.status, kExitDomain);
  EXPECT_EQ(o.err.rfind("error: ", 0), 0u);
}

TEST(Run, UsageErrors) {
  auto c = config(Subcommand::Exponent, kA1);
  c.grid = Grid{1.0, 0.0, 10};
  EXPECT_EQ(run_config(c).status, kExitUsage);
  c.grid = Grid{0.0, 1.0, 1};
  EXPECT_EQ(run_config(c).status, kExitUsage);
  c.grid.reset();
  c.truncation_K = 0;
  EXPECT_EQ(run_config(c).status, kExitUsage);
}

TEST(Run, LadderOutsideA4) {
  const auto o = run_config(config(Subcommand::Ladder, kA1));
  EXPECT_EQ(o.status, kExitDomain);
  EXPECT_EQ(run_config(config(Subcommand::Ladder, kA4)).status, kExitOk);
}

TEST(Run, OutputIsDeterministic) {
  for (auto s : {Subcommand::Exponent, Subcommand::Lattice, Subcommand::Factors, Subcommand::Density}) {
    EXPECT_EQ(run_config(config(s, kA3)).out, run_config(config(s, kA3)).out);
  }
}

TEST(Run, ExponentGrid) {
  auto c = config(Subcommand::Exponent, kA2);
  c.grid = Grid{-1.0, 1.0, 5};
  const auto j = nlohmann::json::parse(run_config(c).out);
  ASSERT_EQ(j["data"].size(), 5u);
  EXPECT_EQ(j["data"][2]["theta"].get<double>(), 0.0);
  EXPECT_NEAR(j["data"][2]["re"].get<double>(), -killing_rate(kA2), 1e-12);
  EXPECT_EQ(nlohmann::json::parse(run_config(config(Subcommand::Exponent, kA2)).out)["data"].size(), 101u);
}

TEST(Run, DensitySkipsOrigin) {
  const auto j = nlohmann::json::parse(run_config(config(Subcommand::Density, kA1)).out);
  EXPECT_EQ(j["data"].size(), 60u);
  for (const auto& row : j["data"]) {
    const double x = row["x"].get<double>();
    // K = 200 cannot resolve |x| = 0.1 to 1e-12; the series is reported as null there.
    if (std::abs(x) < 0.15) {
      EXPECT_TRUE(row["series"].is_null()) << x;
      continue;
    }
    EXPECT_LT(row["delta"].get<double>(), 1e-7 * row["closed"].get<double>()) << x;
  }
}

TEST(Run, FactorsCarryStructure) {
  const auto o = run_config(config(Subcommand::Factors, kA3));
  ASSERT_EQ(o.status, kExitOk);
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_TRUE(j["meta"]["factors"].contains("ascending"));
  EXPECT_EQ(j["checks"].size(), 4u);
}

TEST(Csv, HeaderAndLineEndings) {
  auto c = config(Subcommand::Exponent, kA1);
  c.output_format = Format::Csv;
  c.grid = Grid{0.0, 1.0, 3};
  const auto o = run_config(c);
  ASSERT_EQ(o.status, kExitOk);
  EXPECT_EQ(o.out.substr(0, o.out.find("\r\n")), "theta,re,im");
  std::size_t lines = 0;
  for (std::size_t i = o.out.find("\r\n"); i != std::string::npos; i = o.out.find("\r\n", i + 2)) ++lines;
  EXPECT_EQ(lines, 4u);
  EXPECT_EQ(o.out.find('\n'), o.out.find("\r\n") + 1);
}

TEST(Csv, Quoting) {
  EXPECT_EQ(csv_field(nlohmann::json("a,b")), "\"a,b\"");
  EXPECT_EQ(csv_field(nlohmann::json("say \"hi\"")), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field(nlohmann::json()), "");
  EXPECT_EQ(csv_field(nlohmann::json(true)), "true");
}

TEST(Json, NumberFormatting) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(INFINITY), "null");
  EXPECT_EQ(format_number(std::nan("")), "null");
}

TEST(Env, TermsOverride) {
  ::unsetenv("HYPLEVY_TERMS");
  EXPECT_EQ(default_terms(), 200);
  ::setenv("HYPLEVY_TERMS", "37", 1);
  EXPECT_EQ(default_terms(), 37);
  ::setenv("HYPLEVY_TERMS", "junk", 1);
  EXPECT_EQ(default_terms(), 200);
  ::unsetenv("HYPLEVY_TERMS");
}

// The built tool, driven through the shell.

Outcome shell(const std::string& args) {
  const std::string cmd = std::string(HYPLEVY_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int raw = ::pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out, ""};
}

const std::string kA1Args = "--beta 0.9 --gamma 0.5 --beta-hat 0.2 --gamma-hat 0.3";

TEST(Binary, ValidateMatchesLibrary) {
  const auto o = shell("validate " + kA1Args);
  EXPECT_EQ(o.status, 0);
  EXPECT_EQ(o.out, run_config(config(Subcommand::Validate, kA1)).out);
}

TEST(Binary, NegativeValueWithEquals) {
  const auto o = shell("validate --beta 0.8 --gamma 0.4 --beta-hat=-1.9 --gamma-hat 0.1");
  EXPECT_EQ(o.status, 1);
  EXPECT_EQ(shell("check --beta 0.8 --gamma 0.4 --beta-hat=-1.5 --gamma-hat 0.1").status, 0);
}

TEST(Binary, UsageErrors) {
  EXPECT_EQ(shell("validate --beta 0.9 --gamma 0.5 --beta-hat 0.2").status, 64);
  EXPECT_EQ(shell("bogus " + kA1Args).status, 64);
  EXPECT_EQ(shell("exponent " + kA1Args + " --format xml").status, 64);
  EXPECT_EQ(shell("exponent " + kA1Args + " --grid-min 0").status, 64);
  EXPECT_EQ(shell(kA1Args).status, 64);
}

TEST(Binary, VersionAndLadder) {
  const auto v = shell("--version");
  EXPECT_EQ(v.status, 0);
  EXPECT_NE(v.out.find(kVersion), std::string::npos);
  EXPECT_EQ(shell("ladder " + kA1Args).status, 1);
}

TEST(Binary, WritesOutFile) {
  const auto path = std::filesystem::temp_directory_path() / "hyplevy_cli_test.csv";
  std::filesystem::remove(path);
  const auto o = shell("lattice " + kA1Args + " --format csv --terms 5 --out " + path.string());
  EXPECT_EQ(o.status, 0);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  EXPECT_NE(text.find("\r\n"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Binary, TermsFromEnvironment) {
  const auto a = shell("lattice " + kA1Args + " --terms 7");
  ::setenv("HYPLEVY_TERMS", "7", 1);
  const auto b = shell("lattice " + kA1Args);
  ::unsetenv("HYPLEVY_TERMS");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["data"].size(), 28u);
}

}  // namespace
