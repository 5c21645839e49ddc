// Copyright 2026 The coalsmooth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives the built command-line tool end to end: exit codes, output shape,
// and byte-identical replay.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#ifndef COALSMOOTH_CLI
#error "COALSMOOTH_CLI must name the built tool"
#endif

namespace {

using nlohmann::json;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) {
  return std::string(COALSMOOTH_FIXTURES_DIR) + "/" + name;
}

CliResult run(const std::string& args) {
  static int counter = 0;
  std::string base = ::testing::TempDir() + "cli_" + std::to_string(::getpid()) +
                     "_" + std::to_string(counter++);
  std::string cmd = std::string("'") + COALSMOOTH_CLI + "' " + args + " >'" +
                    base + ".out' 2>'" + base + ".err'";
  int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(base + ".out");
  r.err = slurp(base + ".err");
  std::remove((base + ".out").c_str());
  std::remove((base + ".err").c_str());
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

int count_lines(const std::string& text, bool skip_comments) {
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    if (skip_comments && !line.empty() && line[0] == '#') continue;
    ++n;
  }
  return n;
}

TEST(CliAnalyze, G2HasEmptyStrongNashList) {
  CliResult r = run("analyze " + fixture("g2.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_TRUE(j["strong_nash"].empty());
  EXPECT_TRUE(j["spoa"]["value"].is_null());
  EXPECT_EQ(j["spoa"]["reason"], "no strong Nash equilibrium");
  EXPECT_EQ(j["nash"], json::parse("[[1,1]]"));
}

TEST(CliAnalyze, G1CsvHasFourRows) {
  CliResult r = run("analyze " + fixture("g1.json") + " --format csv");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out, false), 5);
  EXPECT_EQ(r.out.rfind("profile,welfare,is_nash,is_strong_nash\n", 0), 0u);
  EXPECT_NE(r.out.find("0-0,1,true,true"), std::string::npos);
}

TEST(CliAnalyze, WitnessesOnRequest) {
  CliResult r = run("analyze " + fixture("g2.json") + " --witnesses");
  ASSERT_EQ(r.code, 0);
  json j = json::parse(r.out);
  ASSERT_EQ(j["witnesses"].size(), 4u);
  EXPECT_EQ(j["witnesses"][0]["blocking"]["coalition"].size(), 1u);
}

TEST(CliAnalyze, MalformedJsonIsSpecError) {
  std::string path = write_temp("broken.json", "{\"kind\": \"normal_form\",");
  CliResult r = run("analyze '" + path + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliAnalyze, BadFieldIsNamedByPath) {
  json j = json::parse(slurp(fixture("g1.json")));
  j["payload"]["players"][1]["strategies"] = "shared";
  std::string path = write_temp("badfield.json", j.dump());
  CliResult r = run("analyze '" + path + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("payload.players[1].strategies"), std::string::npos)
      << r.err;
}

TEST(CliAnalyze, CapOverflowExitsTwo) {
  CliResult r = run("analyze " + fixture("g3.json") + " --cap 2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("StateSpaceTooLarge"), std::string::npos);
}

TEST(CliAnalyze, MissingFileExitsOne) {
  EXPECT_EQ(run("analyze /nonexistent/game.json").code, 1);
}

TEST(CliSmoothness, G3HalfHalfChecks) {
  CliResult r = run("smoothness " + fixture("g3.json") +
              " --check --lambda 0.5 --mu 0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_TRUE(j["verified"].get<bool>());
  EXPECT_EQ(j["s_star"], json::parse("[0,0,1,0]"));
}

TEST(CliSmoothness, G1FitHasPointWithinHarmonicRatio) {
  CliResult r = run("smoothness " + fixture("g1.json") + " --fit");
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  bool found = false;
  for (const auto& p : j["frontier"]) {
    double lambda = p[0];
    double mu = p[1];
    if (mu < 1 && lambda / (1 - mu) <= 1.5 + 1e-12) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(CliSmoothness, InfeasibleCheckExitsThreeWithWitness) {
  CliResult r = run("smoothness " + fixture("g2.json") + " --check --lambda 10 --mu 0");
  EXPECT_EQ(r.code, 3);
  json j = json::parse(r.out);
  EXPECT_FALSE(j["verified"].get<bool>());
  EXPECT_TRUE(j.contains("witness"));
}

TEST(CliSmoothness, AnchorModes) {
  CliResult opt = run("smoothness " + fixture("g1.json") + " --fit --anchor opt");
  CliResult search = run("smoothness " + fixture("g1.json") + " --fit --anchor search");
  CliResult given = run("smoothness " + fixture("g1.json") + " --fit --anchor 1-1");
  ASSERT_EQ(opt.code, 0);
  ASSERT_EQ(search.code, 0);
  ASSERT_EQ(given.code, 0) << given.err;
  EXPECT_EQ(json::parse(given.out)["s_star"], json::parse("[1,1]"));
  EXPECT_EQ(run("smoothness " + fixture("g1.json") + " --fit --anchor 9-9").code,
            1);
}

TEST(CliSmoothness, PermutationCapWithoutSamplingExitsTwo) {
  EXPECT_EQ(run("smoothness " + fixture("g3.json") + " --fit --perm-cap 2").code,
            2);
  CliResult r = run("smoothness " + fixture("g3.json") +
              " --fit --perm-cap 2 --sample --samples 50 --seed 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(json::parse(r.out)["exact"].get<bool>());
}

TEST(CliSinks, G2CertificateBoundSatisfied) {
  CliResult r = run("sinks " + fixture("g2.json") + " --cert " + fixture("g2.cert.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  ASSERT_EQ(j["sinks"].size(), 1u);
  EXPECT_TRUE(j["sinks"][0]["bound_satisfied"].get<bool>());
  EXPECT_TRUE(j["bound"]["satisfied"].get<bool>());
  EXPECT_TRUE(j["drift"]["holds"].get<bool>());
}

TEST(CliSinks, FalseCertificateExitsFour) {
  json cert = json::parse(slurp(fixture("g2.cert.json")));
  cert["lambda"] = 100.0;
  std::string path = write_temp("bad.cert.json", cert.dump());
  EXPECT_EQ(run("sinks " + fixture("g2.json") + " --cert '" + path + "'").code, 4);
  std::string junk = write_temp("junk.cert.json", "[1,2,3]");
  EXPECT_EQ(run("sinks " + fixture("g2.json") + " --cert '" + junk + "'").code, 4);
}

TEST(CliSinks, ChainCapExitsTwo) {
  EXPECT_EQ(run("sinks " + fixture("g3.json") + " --chain-cap 2").code, 2);
}

TEST(CliDynamics, TraceLengthAndReplay) {
  std::string args = "dynamics " + fixture("g3.json") + " --steps 10000 --seed 7";
  CliResult a = run(args);
  CliResult b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(count_lines(a.out, true), 10001);  // header row plus steps
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("# seed: 7\n"), std::string::npos);
  EXPECT_NE(a.out.find("# generator: "), std::string::npos);
}

TEST(CliDynamics, SeedIsRequired) {
  EXPECT_EQ(run("dynamics " + fixture("g3.json") + " --steps 10").code, 1);
}

TEST(CliDynamics, UnilateralJsonWithPotential) {
  CliResult r = run("dynamics " + fixture("g4.json") +
              " --mode unilateral --steps 5 --seed 2 --format json --initial 1-1");
  ASSERT_EQ(r.code, 0) << r.err;
  json j = json::parse(r.out);
  EXPECT_EQ(j["steps"].size(), 5u);
  EXPECT_TRUE(j["steps"][0].contains("potential"));
  EXPECT_EQ(j["initial"], json::parse("[1,1]"));
}

TEST(CliCheck, PropertiesAndExitCodes) {
  CliResult sub = run("check " + fixture("g4.json") + " --property submodular --cap 2");
  ASSERT_EQ(sub.code, 0) << sub.err;
  EXPECT_TRUE(json::parse(sub.out)["holds"].get<bool>());

  CliResult gamma = run("check " + fixture("g5.json") + " --property marginal-gamma");
  ASSERT_EQ(gamma.code, 0);
  EXPECT_NEAR(json::parse(gamma.out)["gamma"].get<double>(), 0.5, 1e-12);

  EXPECT_EQ(run("check " + fixture("g2.json") + " --property potential").code, 5);
  EXPECT_EQ(run("check " + fixture("g2.json") + " --property submodular").code, 5);
  EXPECT_EQ(run("check " + fixture("g2.json") + " --property monotone").code, 5);

  CliResult inc = run("check " + fixture("increasing_congestion.json") +
                " --property submodular --cap 2");
  EXPECT_EQ(inc.code, 3);
  EXPECT_TRUE(json::parse(inc.out).contains("witness"));

  CliResult close = run("check " + fixture("g3.json") + " --property closeness");
  ASSERT_EQ(close.code, 0);
  EXPECT_NEAR(json::parse(close.out)["lambda"].get<double>(), 0.5, 1e-12);
}

TEST(CliGen, FixturesAreCanonical) {
  for (const std::string name : {"g1", "g2", "g4", "g5"}) {
    CliResult r = run("gen " + name);
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(fixture(name + ".json"))) << name;
  }
  CliResult g3 = run("gen g3 --H 10");
  EXPECT_EQ(g3.out, slurp(fixture("g3.json")));
  json j = json::parse(g3.out);
  EXPECT_EQ(j["payload"]["edges"][0]["fn"], "constant");
  EXPECT_EQ(j["payload"]["edges"][0]["params"][0], 1.0);
}

TEST(CliGen, G2IsPrisonersDilemma) {
  json j = json::parse(run("gen g2").out);
  EXPECT_EQ(j["kind"], "normal_form");
  EXPECT_EQ(j["payload"]["utilities"], json::parse("[[[3,0],[4,1]],[[3,4],[0,1]]]"));
}

TEST(CliGen, RandomFamiliesReplay) {
  for (const std::string fam :
       {"random-cost-sharing", "random-congestion", "random-contribution",
        "random-welfare-sharing", "random-normal-form"}) {
    std::string args = "gen " + fam + " --n 3 --r 4 --seed 1";
    CliResult a = run(args);
    CliResult b = run(args);
    ASSERT_EQ(a.code, 0) << fam << a.err;
    EXPECT_EQ(a.out, b.out) << fam;
    EXPECT_NE(a.out, run("gen " + fam + " --n 3 --r 4 --seed 2").out) << fam;
  }
}

TEST(CliGen, UnknownFamilyExitsOne) {
  EXPECT_EQ(run("gen g9").code, 1);
}

TEST(CliGen, OutputFile) {
  std::string path = ::testing::TempDir() + "gen_out.json";
  ASSERT_EQ(run("gen g1 -o '" + path + "'").code, 0);
  EXPECT_EQ(slurp(path), slurp(fixture("g1.json")));
}

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("analyze").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

}  // namespace
