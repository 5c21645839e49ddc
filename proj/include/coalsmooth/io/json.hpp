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

#ifndef COALSMOOTH_IO_JSON_HPP
#define COALSMOOTH_IO_JSON_HPP

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coalsmooth/chain.hpp"
#include "coalsmooth/dynamics.hpp"
#include "coalsmooth/equilibria.hpp"
#include "coalsmooth/smoothness.hpp"
#include "coalsmooth/structure.hpp"

namespace coalsmooth::io {

using nlohmann::json;

inline json profile_json(std::span<const int> s) {
  return json(std::vector<int>(s.begin(), s.end()));
}

/// Finite values as numbers; infinities as null so output stays valid JSON.
inline json number_json(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

inline const char* direction_name(Direction d) {
  return d == Direction::kUtilityMax ? "utility" : "cost";
}

inline json ratio_json(const Ratio& r) {
  json j;
  j["value"] = r.value && !r.unbounded() ? json(*r.value) : json(nullptr);
  j["unbounded"] = r.unbounded();
  j["reason"] = r.value && !r.unbounded() ? json(nullptr) : json(r.reason);
  return j;
}

inline json coalition_witness_json(const CoalitionWitness& w) {
  return {{"coalition", profile_json(w.coalition.members())},
          {"joint", profile_json(w.joint)}};
}

inline json report_json(const EquilibriumReport& r) {
  json j;
  j["direction"] = direction_name(r.direction);
  j["nash"] = json::array();
  for (const auto& s : r.nash) j["nash"].push_back(profile_json(s));
  j["strong_nash"] = json::array();
  for (const auto& s : r.strong_nash) {
    j["strong_nash"].push_back(profile_json(s));
  }
  j["opt"] = {{"profile", profile_json(r.opt.profile)},
              {"value", r.opt.value}};
  j["poa"] = ratio_json(r.poa);
  j["pos"] = ratio_json(r.pos);
  j["spoa"] = ratio_json(r.spoa);
  json witnesses = json::array();
  for (const auto& row : r.rows) {
    if (row.blocking) {
      witnesses.push_back({{"profile", profile_json(row.profile)},
                           {"blocking", coalition_witness_json(*row.blocking)}});
    }
  }
  if (!witnesses.empty()) j["witnesses"] = std::move(witnesses);
  return j;
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One row per profile: profile,welfare,is_nash,is_strong_nash.
inline void write_report_csv(std::ostream& out, const EquilibriumReport& r) {
  out << "profile,welfare,is_nash,is_strong_nash\n";
  for (const auto& row : r.rows) {
    out << format_profile(row.profile) << ',' << format_number(row.welfare)
        << ',' << (row.nash ? "true" : "false") << ','
        << (row.strong_nash ? "true" : "false") << '\n';
  }
}

inline json certificate_json(const SmoothnessCertificate& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["direction"] = direction_name(c.direction);
  j["s_star"] = profile_json(c.s_star);
  j["lambda"] = c.lambda;
  j["mu"] = c.mu;
  j["verified"] = c.verified;
  j["exact"] = c.exact;
  if (c.witness) {
    json w = {{"profile", profile_json(c.witness->profile)},
              {"lhs", c.witness->lhs},
              {"rhs", c.witness->rhs}};
    if (c.witness->ordering) {
      w["ranks"] = c.witness->ordering->ranks();
    }
    j["witness"] = std::move(w);
  }
  j["frontier"] = json::array();
  for (const auto& p : c.frontier) j["frontier"].push_back({p.lambda, p.mu});
  j["best_ratio"] = number_json(c.best_ratio);
  if (c.ratio_supremum) j["ratio_supremum"] = *c.ratio_supremum;
  return j;
}

/// Reads the fields a certificate file must carry. Structural problems are
/// reported as rejected certificates.
inline SmoothnessCertificate certificate_from_json(const json& j) {
  auto reject = [](const std::string& what) {
    throw Error(ErrorCode::kRejectedCertificate, "certificate: " + what);
  };
  if (!j.is_object()) reject("expected an object");
  SmoothnessCertificate c;
  try {
    std::string kind = j.value("kind", "coalitional");
    if (kind == "coalitional") {
      c.kind = SmoothnessKind::kCoalitional;
    } else if (kind == "unilateral") {
      c.kind = SmoothnessKind::kUnilateral;
    } else {
      reject("unknown kind '" + kind + "'");
    }
    c.s_star = j.at("s_star").get<std::vector<int>>();
    c.lambda = j.at("lambda").get<double>();
    c.mu = j.at("mu").get<double>();
    c.verified = j.value("verified", false);
  } catch (const json::exception& e) {
    reject(e.what());
  }
  if (!(c.lambda >= 0.0) || !(c.mu >= 0.0)) reject("lambda and mu must be >= 0");
  return c;
}

inline json sink_json(const ChainAnalysis& chain, const Sink& s) {
  json states = json::array();
  for (int k : s.states) states.push_back(profile_json(chain.states[k]));
  return {{"states", std::move(states)},
          {"stationary", s.stationary},
          {"expected_welfare", s.expected_welfare},
          {"residual", s.residual}};
}

inline json chain_json(const ChainAnalysis& chain,
                       const std::optional<SinkBound>& bound = std::nullopt,
                       const std::optional<DriftCheck>& drift = std::nullopt) {
  json j;
  j["direction"] = direction_name(chain.direction);
  j["num_states"] = chain.states.size();
  j["sinks"] = json::array();
  for (std::size_t k = 0; k < chain.sinks.size(); ++k) {
    json s = sink_json(chain, chain.sinks[k]);
    if (bound) s["bound_satisfied"] = static_cast<bool>(bound->satisfied[k]);
    j["sinks"].push_back(std::move(s));
  }
  if (bound) {
    j["bound"] = {{"threshold", bound->threshold},
                  {"empirical", bound->empirical},
                  {"satisfied", bound->all_satisfied}};
  }
  if (drift) {
    json d = {{"holds", drift->holds}, {"min_margin", drift->min_margin}};
    if (drift->violation) {
      d["violation"] = {
          {"profile", profile_json(chain.states[drift->violation->state])},
          {"expected", drift->violation->expected},
          {"bound", drift->violation->bound}};
    }
    j["drift"] = std::move(d);
  }
  return j;
}

inline json trace_json(const DynamicsTrace& t) {
  json j;
  j["mode"] = to_string(t.mode);
  j["seed"] = t.seed;
  j["generator"] = std::string(Rng::kName);
  j["initial"] = profile_json(t.initial);
  j["steps"] = json::array();
  for (const auto& st : t.steps) {
    json row = {{"t", st.t},
                {"coalition", profile_json(st.coalition.members())},
                {"profile", profile_json(st.profile)},
                {"welfare", st.welfare}};
    if (st.potential) row["potential"] = *st.potential;
    j["steps"].push_back(std::move(row));
  }
  j["empirical_mean_welfare"] = t.empirical_mean_welfare;
  return j;
}

inline json profile_witness_json(const ProfileWitness& w) {
  json j = {{"profile", profile_json(w.profile)}, {"player", w.player}};
  if (w.other >= 0) j["other"] = w.other;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  return j;
}

inline json property_json(const std::string& name, const PropertyCheck& c) {
  json j = {{"property", name}, {"holds", c.holds}};
  if (c.witness) j["witness"] = profile_witness_json(*c.witness);
  return j;
}

inline json submodularity_json(const SubmodularityCheck& c) {
  json j = {{"property", "submodular"},
            {"holds", c.holds},
            {"pairs_checked", c.pairs_checked},
            {"skipped", c.skipped}};
  if (c.witness) {
    const auto& w = *c.witness;
    j["witness"] = {{"universe", w.universe},
                    {"s", w.s},
                    {"t", w.t},
                    {"added", w.added},
                    {"gain_s", w.gain_s},
                    {"gain_t", w.gain_t}};
  }
  return j;
}

}  // namespace coalsmooth::io

#endif  // COALSMOOTH_IO_JSON_HPP
