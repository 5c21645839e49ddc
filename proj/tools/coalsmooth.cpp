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

// coalsmooth command-line tool.
//
// Exit codes: 0 ok, 1 spec or usage error, 2 cap exceeded, 3 check failed,
// 4 rejected certificate, 5 property undefined for the game family.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "coalsmooth/coalsmooth.hpp"

namespace cs = coalsmooth;
namespace fx = coalsmooth::games::fixtures;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kSpec = 1, kCaps = 2, kCheckFailed = 3, kCert = 4, kUndefined = 5 };

int exit_code(cs::ErrorCode code) {
  switch (code) {
    case cs::ErrorCode::kStateSpaceTooLarge:
      return kCaps;
    case cs::ErrorCode::kIncomparable:
      return kCheckFailed;
    case cs::ErrorCode::kRejectedCertificate:
      return kCert;
    case cs::ErrorCode::kMissingPotential:
    case cs::ErrorCode::kMissingOutStrategy:
    case cs::ErrorCode::kNotMultisetExtendable:
      return kUndefined;
    default:
      return kSpec;
  }
}

struct Common {
  std::string input;
  std::string output;
  std::string format = "json";
  std::uint64_t profile_cap = cs::kDefaultProfileCap;
};

/// Writes to --output when given, otherwise to standard output.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) {
        throw cs::Error(cs::ErrorCode::kInvalidArgument,
                        "cannot write " + path);
      }
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit(const Common& c, const json& j) {
  Sink sink(c.output);
  sink.out() << j.dump(2) << '\n';
}

cs::Game load(const Common& c) {
  return cs::games::load_game_file(c.input);
}

void add_common(CLI::App* cmd, Common& c, bool with_format,
                const char* cap_flag = "--cap") {
  cmd->add_option("spec", c.input, "Game spec JSON file")->required();
  cmd->add_option("-o,--output", c.output, "Output file (default stdout)");
  cmd->add_option(cap_flag, c.profile_cap, "Profile enumeration cap")
      ->check(CLI::PositiveNumber);
  if (with_format) {
    cmd->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  }
}

// analyze ---------------------------------------------------------------------

struct AnalyzeArgs {
  Common common;
  bool witnesses = false;
};

int run_analyze(const AnalyzeArgs& a) {
  cs::Game game = load(a.common);
  auto report = cs::efficiency_ratios(game, a.witnesses, a.common.profile_cap);
  if (a.common.format == "csv") {
    Sink sink(a.common.output);
    cs::io::write_report_csv(sink.out(), report);
  } else {
    emit(a.common, cs::io::report_json(report));
  }
  return kOk;
}

// smoothness ------------------------------------------------------------------

struct SmoothnessArgs {
  Common common;
  bool fit = false;
  bool check = false;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::string kind = "coalitional";
  std::string anchor = "opt";
  int permutation_cap = cs::kDefaultPermutationCap;
  bool sample = false;
  int samples = 2000;
  std::uint64_t seed = 0;
};

int run_smoothness(const SmoothnessArgs& a) {
  cs::Game game = load(a.common);
  cs::SmoothnessOptions opts;
  opts.profile_cap = a.common.profile_cap;
  opts.permutation_cap = a.permutation_cap;
  opts.sample = a.sample;
  opts.samples = a.samples;
  opts.seed = a.seed;
  auto kind = a.kind == "unilateral" ? cs::SmoothnessKind::kUnilateral
                                     : cs::SmoothnessKind::kCoalitional;
  std::optional<cs::StrategyProfile> anchor;
  if (a.anchor != "opt" && a.anchor != "search") {
    anchor = cs::parse_profile(a.anchor);
    game.validate_profile(*anchor, /*allow_out=*/false);
  }

  if (a.check) {
    if (!a.lambda || !a.mu) {
      throw cs::Error(cs::ErrorCode::kInvalidArgument,
                      "--check needs --lambda and --mu");
    }
    if (a.anchor == "search") {
      throw cs::Error(cs::ErrorCode::kInvalidArgument,
                      "--check needs a fixed anchor (opt or a profile)");
    }
    cs::StrategyProfile s_star =
        anchor ? *anchor : cs::optimum(game, a.common.profile_cap).profile;
    auto cert =
        kind == cs::SmoothnessKind::kCoalitional
            ? cs::check_coalitional_smoothness(game, s_star, *a.lambda, *a.mu,
                                               opts)
            : cs::check_unilateral_smoothness(game, s_star, *a.lambda, *a.mu,
                                              opts);
    json out = cs::io::certificate_json(cert);
    if (a.fit) {
      out = {{"check", out},
             {"fit", cs::io::certificate_json(
                         cs::fit_smoothness(game, kind, anchor, opts))}};
    }
    emit(a.common, out);
    if (!cert.verified) {
      const auto& w = *cert.witness;
      std::cerr << "check failed at profile " << cs::format_profile(w.profile);
      if (w.ordering) {
        std::cerr << " ranks " << cs::format_profile(w.ordering->ranks());
      }
      std::cerr << ": " << w.lhs << " vs " << w.rhs << '\n';
      return kCheckFailed;
    }
    return kOk;
  }

  auto cert = a.anchor == "search"
                  ? cs::search_smoothness_anchor(game, kind, opts)
                  : cs::fit_smoothness(game, kind, anchor, opts);
  emit(a.common, cs::io::certificate_json(cert));
  return cert.verified ? kOk : kCheckFailed;
}

// dynamics --------------------------------------------------------------------

struct DynamicsArgs {
  Common common;
  std::string mode = "coalitional";
  int steps = 1000;
  std::uint64_t seed = 0;
  std::string initial;
};

int run_dynamics(const DynamicsArgs& a) {
  cs::Game game = load(a.common);
  cs::DynamicsOptions opts;
  opts.cap = a.common.profile_cap;
  if (!a.initial.empty()) opts.initial = cs::parse_profile(a.initial);
  cs::DynamicsTrace trace =
      a.mode == "unilateral" ? cs::run_unilateral(game, a.steps, a.seed, opts)
                             : cs::run_coalitional(game, a.steps, a.seed, opts);
  if (a.common.format == "json") {
    emit(a.common, cs::io::trace_json(trace));
  } else {
    Sink sink(a.common.output);
    cs::write_trace_csv(sink.out(), trace);
  }
  return kOk;
}

// sinks -----------------------------------------------------------------------

struct SinksArgs {
  Common common;
  std::string cert;
  std::uint64_t chain_cap = cs::kDefaultChainCap;
};

int run_sinks(const SinksArgs& a) {
  cs::Game game = load(a.common);
  cs::ChainAnalysis chain = cs::sink_equilibria(game, a.chain_cap);
  std::optional<cs::SinkBound> bound;
  std::optional<cs::DriftCheck> drift;
  if (!a.cert.empty()) {
    cs::SmoothnessCertificate claimed;
    try {
      claimed = cs::io::certificate_from_json(cs::games::read_json_file(a.cert));
    } catch (const cs::Error& e) {
      throw cs::Error(cs::ErrorCode::kRejectedCertificate, e.what());
    }
    if (claimed.kind != cs::SmoothnessKind::kCoalitional) {
      throw cs::Error(cs::ErrorCode::kRejectedCertificate,
                      "sink bound needs a coalitional certificate");
    }
    // The file's own `verified` flag is not trusted.
    cs::SmoothnessCertificate cert;
    try {
      cert = cs::check_coalitional_smoothness(game, claimed.s_star,
                                              claimed.lambda, claimed.mu);
    } catch (const cs::Error& e) {
      if (e.code() == cs::ErrorCode::kStateSpaceTooLarge) throw;
      throw cs::Error(cs::ErrorCode::kRejectedCertificate, e.what());
    }
    if (!cert.verified) {
      throw cs::Error(cs::ErrorCode::kRejectedCertificate,
                      "certificate does not verify on this game");
    }
    double opt = cs::optimum(game, a.common.profile_cap).value;
    double ref = game.maximizes() ? opt : game.social_welfare(cert.s_star);
    bound = cs::sink_bound(chain, cert, opt);
    drift = cs::drift_check(chain, cert, ref);
  }
  emit(a.common, cs::io::chain_json(chain, bound, drift));
  return kOk;
}

// check -----------------------------------------------------------------------

struct CheckArgs {
  Common common;
  std::string property;
  int multiplicity = 2;
};

int run_check(const CheckArgs& a) {
  cs::Game game = load(a.common);
  const auto cap = a.common.profile_cap;
  const std::string& p = a.property;
  json out;
  bool holds = true;
  if (p == "potential") {
    auto r = cs::verify_potential(game, cap);
    out = cs::io::property_json(p, r);
    holds = r.holds;
  } else if (p == "monotone") {
    auto r = cs::check_monotone_participation(game, cap);
    out = cs::io::property_json(p, r);
    holds = r.holds;
  } else if (p == "positive-externalities") {
    auto r = cs::check_positive_externalities(game, cap);
    out = cs::io::property_json(p, r);
    holds = r.holds;
  } else if (p == "closeness") {
    auto c = cs::potential_closeness(game, cap);
    out = {{"property", p}, {"holds", true}, {"lambda", c.lambda}, {"mu", c.mu}};
  } else if (p == "marginal-gamma") {
    auto g = cs::marginal_contribution_gamma(game, cap);
    out = {{"property", p}, {"holds", true}, {"gamma", cs::io::number_json(g.gamma)}};
    if (g.binding) out["binding"] = cs::io::profile_witness_json(*g.binding);
  } else {
    auto r = cs::check_potential_submodularity(game, a.multiplicity, cap);
    out = cs::io::submodularity_json(r);
    holds = r.holds;
  }
  emit(a.common, out);
  return holds ? kOk : kCheckFailed;
}

// gen -------------------------------------------------------------------------

struct GenArgs {
  std::string family;
  std::string output;
  double high = 10.0;
  int n = 3;
  int r = 3;
  std::uint64_t seed = 0;
  std::string shape = "harmonic";
};

int run_gen(const GenArgs& a) {
  json spec;
  const std::string& f = a.family;
  if (f == "g1") {
    spec = fx::g1();
  } else if (f == "g2") {
    spec = fx::g2();
  } else if (f == "g3") {
    spec = fx::g3(a.high);
  } else if (f == "g4") {
    spec = fx::g4();
  } else if (f == "g5") {
    spec = fx::g5();
  } else if (f == "harmonic-congestion") {
    spec = fx::harmonic_congestion4();
  } else if (f == "increasing-congestion") {
    spec = fx::increasing_congestion();
  } else if (f == "random-cost-sharing") {
    spec = fx::random_cost_sharing(a.n, a.r, a.seed);
  } else if (f == "random-congestion") {
    spec = fx::random_congestion(a.n, a.r, a.seed, a.shape);
  } else if (f == "random-contribution") {
    spec = fx::random_contribution(a.n, a.seed);
  } else if (f == "random-welfare-sharing") {
    spec = fx::random_welfare_sharing(a.n, a.seed);
  } else if (f == "random-normal-form") {
    spec = fx::random_normal_form(a.n, a.seed);
  } else {
    throw cs::Error(cs::ErrorCode::kSpecError, "unknown family '" + f + "'");
  }
  // Validate before writing so a generator bug never emits a bad spec.
  cs::games::load_game(spec);
  Common c;
  c.output = a.output;
  emit(c, spec);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coalitional analysis of finite strategic games"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Equilibria and efficiency ratios");
  add_common(c_analyze, analyze.common, true);
  c_analyze->add_flag("--witnesses", analyze.witnesses,
                      "Include a blocking coalition for rejected profiles");

  SmoothnessArgs smooth;
  auto* c_smooth = app.add_subcommand("smoothness", "Check or fit smoothness");
  add_common(c_smooth, smooth.common, false);
  c_smooth->add_flag("--fit", smooth.fit, "Fit the best (lambda, mu)");
  c_smooth->add_flag("--check", smooth.check, "Check a given (lambda, mu)");
  c_smooth->add_option("--lambda", smooth.lambda, "lambda for --check");
  c_smooth->add_option("--mu", smooth.mu, "mu for --check");
  c_smooth->add_option("--kind", smooth.kind, "Deviation model")
      ->check(CLI::IsMember({"coalitional", "unilateral"}));
  c_smooth->add_option("--anchor", smooth.anchor,
                       "opt, search, or a dash-joined profile");
  c_smooth->add_option("--perm-cap", smooth.permutation_cap,
                       "Exact ordering optimization up to this many players")
      ->check(CLI::PositiveNumber);
  c_smooth->add_flag("--sample", smooth.sample,
                     "Sample orderings above the permutation cap");
  c_smooth->add_option("--samples", smooth.samples, "Orderings per profile")->check(CLI::PositiveNumber);
  c_smooth->add_option("--seed", smooth.seed, "Seed for ordering samples");

  DynamicsArgs dyn;
  dyn.common.format = "csv";
  auto* c_dyn = app.add_subcommand("dynamics", "Simulate best-response dynamics");
  add_common(c_dyn, dyn.common, true);
  c_dyn->add_option("--mode", dyn.mode, "Coalition or single-player moves")
      ->check(CLI::IsMember({"coalitional", "unilateral"}));
  c_dyn->add_option("--steps", dyn.steps, "Number of steps")->check(CLI::NonNegativeNumber);
  c_dyn->add_option("--seed", dyn.seed, "64-bit seed")->required();
  c_dyn->add_option("--initial", dyn.initial, "Dash-joined start profile");

  SinksArgs sinks;
  auto* c_sinks = app.add_subcommand("sinks", "Exact chain and sink equilibria");
  add_common(c_sinks, sinks.common, false);
  c_sinks->add_option("--cert", sinks.cert, "Coalitional certificate JSON");
  c_sinks->add_option("--chain-cap", sinks.chain_cap, "Chain state cap")
      ->check(CLI::PositiveNumber);

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Structural property checks");
  // Here --cap is the multiplicity cap; enumeration uses --profile-cap.
  add_common(c_check, check.common, false, "--profile-cap");
  c_check->add_option("--property", check.property)
      ->required()
      ->check(CLI::IsMember({"potential", "closeness", "monotone",
                             "positive-externalities", "marginal-gamma",
                             "submodular"}));
  c_check->add_option("--cap,--multiplicity", check.multiplicity,
                      "Per-strategy multiplicity cap for submodular")
      ->check(CLI::PositiveNumber);

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Emit a fixture game spec");
  c_gen->add_option("family", gen.family, "Fixture or random family name")->required();
  c_gen->add_option("-o,--output", gen.output, "Output file (default stdout)");
  c_gen->add_option("--H", gen.high, "Middle edge value for g3");
  c_gen->add_option("--n", gen.n, "Players")->check(CLI::Range(1, 8));
  c_gen->add_option("--r", gen.r, "Resources or strategies")->check(CLI::Range(1, 16));
  c_gen->add_option("--seed", gen.seed, "Generator seed");
  c_gen->add_option("--shape", gen.shape, "Congestion share shape")
      ->check(CLI::IsMember({"harmonic", "decreasing", "any"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSpec;
  }

  try {
    if (*c_analyze) return run_analyze(analyze);
    if (*c_smooth) return run_smoothness(smooth);
    if (*c_dyn) return run_dynamics(dyn);
    if (*c_sinks) return run_sinks(sinks);
    if (*c_check) return run_check(check);
    if (*c_gen) return run_gen(gen);
  } catch (const cs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSpec;
  }
  return kSpec;
}
