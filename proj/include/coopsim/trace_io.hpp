// Copyright 2026 The coopsim Authors
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

#ifndef COOPSIM_TRACE_IO_HPP_
#define COOPSIM_TRACE_IO_HPP_

// Serialization: line-delimited step traces, run manifests, audit reports,
// registry and oracle exports, and a tolerance-aware trace comparator.
//
// Trace schema (one JSON object per line):
//   {"type":"step","t":..,"actions":[..],"payoffs":[..],"modifiers":[..],
//    "rewards":[..],"trust":[[..]..]|null,"loyalty":[..]|null,
//    "terminated":bool,"truncated":bool}
//   {"type":"summary","schema_version":..,"env":..,"mode":..,"seed":..,
//    "steps":..,"returns":[..],"f_fin":..}
// Non-finite numbers are written as the strings "NaN", "Infinity" and
// "-Infinity".

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coopsim/audit.hpp"
#include "coopsim/env_config.hpp"
#include "coopsim/errors.hpp"
#include "coopsim/oracles.hpp"
#include "coopsim/policies.hpp"
#include "coopsim/rollout.hpp"

namespace coopsim {

using json = nlohmann::ordered_json;

// Bump whenever a record field is added, removed, renamed or retyped.
inline constexpr int kTraceSchemaVersion = 1;

inline const std::vector<std::string>& step_record_fields() {
  static const std::vector<std::string> f = {
      "type",    "t",     "actions", "payoffs",    "modifiers",
      "rewards", "trust", "loyalty", "terminated", "truncated"};
  return f;
}

inline const std::vector<std::string>& summary_record_fields() {
  static const std::vector<std::string> f = {
      "type", "schema_version", "env", "mode", "seed", "steps", "returns",
      "f_fin"};
  return f;
}

inline json number(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  return x;
}

inline json numbers(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

inline json to_json(const SquareMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) rows.push_back(numbers(m.row(i)));
  return rows;
}

inline json to_json(const StepRecord& r) {
  json j;
  j["type"] = "step";
  j["t"] = r.t;
  j["actions"] = numbers(r.actions);
  j["payoffs"] = numbers(r.payoffs);
  j["modifiers"] = numbers(r.modifiers);
  j["rewards"] = numbers(r.rewards);
  j["trust"] = r.trust ? to_json(*r.trust) : json(nullptr);
  j["loyalty"] = r.loyalty ? numbers(*r.loyalty) : json(nullptr);
  j["terminated"] = r.terminated;
  j["truncated"] = r.truncated;
  return j;
}

// f_fin over every reward emitted in the episode.
inline double trace_f_fin(const EpisodeTrace& tr) {
  std::vector<double> all;
  for (const auto& s : tr.steps)
    all.insert(all.end(), s.rewards.begin(), s.rewards.end());
  return all.empty() ? 1.0 : f_fin(all);
}

inline json summary_json(const EpisodeTrace& tr) {
  json j;
  j["type"] = "summary";
  j["schema_version"] = kTraceSchemaVersion;
  j["env"] = tr.env_id;
  j["mode"] = std::string(to_string(tr.mode));
  j["seed"] = tr.seed;
  j["steps"] = tr.steps.size();
  j["returns"] = numbers(tr.returns());
  j["f_fin"] = number(trace_f_fin(tr));
  return j;
}

inline std::string render_trace(const EpisodeTrace& tr) {
  std::string out;
  for (const auto& s : tr.steps) out += to_json(s).dump() + "\n";
  out += summary_json(tr).dump() + "\n";
  return out;
}

struct RunManifest {
  std::string env_id;
  RewardMode mode = RewardMode::kIntegrated;
  std::vector<std::string> policies;
  std::vector<std::uint64_t> seeds;
  std::string out;
  bool hide_dij = false;
  int schema_version = kTraceSchemaVersion;
};

inline json to_json(const RunManifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["env"] = m.env_id;
  j["mode"] = std::string(to_string(m.mode));
  j["policies"] = m.policies;
  j["seeds"] = m.seeds;
  j["out"] = m.out;
  j["hide_dij"] = m.hide_dij;
  return j;
}

inline RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    m.env_id = j.at("env").get<std::string>();
    m.mode = parse_reward_mode(j.at("mode").get<std::string>());
    m.policies = j.at("policies").get<std::vector<std::string>>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.out = j.at("out").get<std::string>();
    m.hide_dij = j.value("hide_dij", false);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed manifest: ") + e.what());
  }
  if (m.schema_version != kTraceSchemaVersion)
    throw DomainError("manifest schema version " +
                      std::to_string(m.schema_version) + " is not supported");
  return m;
}

inline json to_json(const AuditOutcome& o) {
  json j;
  j["deviator_delta"] = number(o.deviator_delta);
  j["partner_mean_delta"] = number(o.partner_mean_delta);
  j["exploitative"] = o.exploitative;
  return j;
}

inline json to_json(const StaticAuditReport& r) {
  json j;
  j["kind"] = "static";
  j["env"] = r.env_id;
  j["mode"] = std::string(to_string(r.mode));
  j["seed"] = r.seed;
  json rows = json::array();
  for (std::size_t k = 0; k < r.levels_pct.size(); ++k) {
    json row;
    row["level_pct"] = r.levels_pct[k];
    row["returns"] = numbers(r.returns[k]);
    rows.push_back(row);
  }
  j["rows"] = rows;
  json devs = json::array();
  for (const auto& d : r.deviations) {
    json dj = to_json(d.outcome);
    dj["level_pct"] = d.level_pct;
    dj["deviator_action"] = number(d.deviator_action);
    devs.push_back(dj);
  }
  j["deviations"] = devs;
  j["exploitative_count"] = r.exploitative_count();
  return j;
}

inline json to_json(const TemporalAuditReport& r) {
  json j;
  j["kind"] = "temporal";
  j["env"] = r.env_id;
  j["mode"] = std::string(to_string(r.mode));
  j["seed"] = r.seed;
  j["baseline_returns"] = numbers(r.baseline_returns);
  json res = json::array();
  for (const auto& x : r.results) {
    json rj = to_json(x.outcome);
    rj["strategy"] = std::string(to_string(x.strategy.kind));
    rj["fraction"] = x.strategy.fraction;
    rj["step"] = x.strategy.step;
    res.push_back(rj);
  }
  j["results"] = res;
  return j;
}

inline json to_json(const EnvConfig& c) {
  json j;
  j["env"] = c.env_id;
  j["tier"] = std::string(to_string(c.tier));
  j["n_agents"] = c.n_agents;
  j["horizon"] = c.horizon;
  j["endowments"] = numbers(c.endowments);
  json d = json::array();
  for (std::size_t i = 0; i < c.interdependence.size(); ++i)
    d.push_back(numbers(c.interdependence.row(i)));
  j["interdependence"] = d;
  j["value_function"] =
      c.value_params.spec() == ValueSpec::kLogarithmic ? "log" : "power";
  j["theta"] = c.value_params.theta();
  j["beta"] = c.value_params.beta_power();
  j["gamma"] = c.value_params.gamma();
  if (c.trust_params) {
    const auto& t = *c.trust_params;
    j["trust"] = {{"kappa", t.kappa()},
                  {"lambda_plus", t.lambda_plus()},
                  {"lambda_minus", t.lambda_minus()},
                  {"mu_reputation", t.mu_reputation()}};
  }
  if (c.tr3_params) {
    const auto& p = *c.tr3_params;
    j["team"] = {{"omega", p.omega()},         {"beta", p.beta_scale()},
                 {"cost", p.cost_c()},         {"phi_benefit", p.phi_benefit()},
                 {"phi_cost", p.phi_cost()},   {"a_max", p.a_max()},
                 {"loyalty_horizon", p.loyalty_horizon()}};
  }
  if (c.tr4_params) {
    const auto& p = *c.tr4_params;
    j["reciprocity"] = {{"rho0", p.rho0()},       {"eta", p.eta()},
                        {"kappa_r", p.kappa_r()}, {"k_window", p.k_window()},
                        {"lambda_r", p.lambda_r()},
                        {"omega_amp", p.omega_amp()}};
  }
  json ov = json::object();
  for (const auto& [k, v] : c.overlay) ov[k] = number(v);
  j["overlay"] = ov;
  return j;
}

// Config snippet that replays a solved oracle as fixed constants.
inline json oracle_snippet(const OracleSolution& s) {
  json j;
  j["env"] = s.env_id;
  j["oracle"] = std::string(to_string(s.name));
  j["profile"] = numbers(s.profile);
  j["iterations"] = s.iterations;
  j["residual"] = number(s.residual);
  return j;
}

inline std::string sweep_csv(const SweepTable& t) {
  std::ostringstream os;
  os.precision(17);
  os << "pct";
  if (!t.rows.empty())
    for (std::size_t i = 0; i < t.rows[0].mean_returns.size(); ++i)
      os << ",R" << i;
  os << ",total\n";
  for (const auto& r : t.rows) {
    os << r.pct;
    for (double x : r.mean_returns) os << ',' << number(x).dump();
    os << ',' << number(r.mean_total).dump() << '\n';
  }
  return os.str();
}

struct CompareResult {
  bool equal = true;
  std::size_t line = 0;  // 1-based line of first difference
  std::string detail;
};

namespace trace_detail {

inline bool close(double a, double b, double rtol) {
  if (a == b) return true;
  return std::fabs(a - b) <= rtol * std::max(std::fabs(a), std::fabs(b));
}

inline bool compare_values(const json& a, const json& b, double rtol,
                           const std::string& path, std::string& why) {
  if (a.is_number() && b.is_number()) {
    if (close(a.get<double>(), b.get<double>(), rtol)) return true;
    why = path + ": " + a.dump() + " vs " + b.dump();
    return false;
  }
  if (a.type() != b.type()) {
    why = path + ": type mismatch";
    return false;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      why = path + ": length " + std::to_string(a.size()) + " vs " +
            std::to_string(b.size());
      return false;
    }
    for (std::size_t k = 0; k < a.size(); ++k)
      if (!compare_values(a[k], b[k], rtol, path + "[" + std::to_string(k) + "]",
                          why))
        return false;
    return true;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) {
      why = path + ": key count differs";
      return false;
    }
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) {
        why = path + "." + it.key() + ": missing";
        return false;
      }
      if (!compare_values(it.value(), b.at(it.key()), rtol,
                          path + "." + it.key(), why))
        return false;
    }
    return true;
  }
  if (a != b) {
    why = path + ": " + a.dump() + " vs " + b.dump();
    return false;
  }
  return true;
}

}  // namespace trace_detail

// Line-by-line comparison; numbers match within relative tolerance, all
// other values exactly.
inline CompareResult compare_traces(std::string_view a, std::string_view b,
                                    double rtol = 1e-7) {
  std::istringstream sa{std::string(a)}, sb{std::string(b)};
  std::string la, lb;
  CompareResult res;
  for (std::size_t line = 1;; ++line) {
    const bool ga = static_cast<bool>(std::getline(sa, la));
    const bool gb = static_cast<bool>(std::getline(sb, lb));
    if (!ga && !gb) return res;
    if (ga != gb) return {false, line, "line count differs"};
    json ja, jb;
    try {
      ja = json::parse(la);
      jb = json::parse(lb);
    } catch (const json::exception& e) {
      return {false, line, std::string("unparsable line: ") + e.what()};
    }
    std::string why;
    if (!trace_detail::compare_values(ja, jb, rtol, "$", why))
      return {false, line, why};
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write " + path);
  out << content;
  if (!out) throw DomainError("write failed: " + path);
}

}  // namespace coopsim

#endif  // COOPSIM_TRACE_IO_HPP_
