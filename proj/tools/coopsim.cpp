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

// coopsim command-line front end.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopsim/coopsim.hpp"

namespace fs = std::filesystem;
using namespace coopsim;

namespace {

struct Common {
  std::vector<std::string> envs;
  std::string mode = "integrated";
  std::vector<std::string> policies;
  std::vector<std::uint64_t> seeds;
  std::string out;
  bool hide_dij = false;
};

void add_env(CLI::App* c, Common& o, bool required = true) {
  auto* opt = c->add_option("--env", o.envs, "environment id, repeatable; 'all' for every registered env");
  if (required) opt->required();
}
void add_mode(CLI::App* c, Common& o) {
  c->add_option("--mode", o.mode, "reward mode")
      ->check(CLI::IsMember({"private", "integrated", "cooperative"}));
}
void add_seeds(CLI::App* c, Common& o) {
  c->add_option("--seed", o.seeds, "episode seed, repeatable (default 0)");
}

std::vector<std::string> expand_envs(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& e : in) {
    if (e == "all") {
      for (const auto& id : registered_env_ids()) out.push_back(id);
    } else {
      lookup_env(e);  // validates
      out.push_back(e);
    }
  }
  return out;
}

std::vector<std::uint64_t> seeds_or_default(const std::vector<std::uint64_t>& s) {
  return s.empty() ? std::vector<std::uint64_t>{0} : s;
}

fs::path out_dir(const std::string& out) {
  fs::path p = out.empty() ? fs::path(".") : fs::path(out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw DomainError("cannot create " + p.string() + ": " + ec.message());
  return p;
}

std::vector<PolicySpec> agent_specs(const std::vector<std::string>& names, int n) {
  if (names.empty()) throw DomainError("at least one --policy is required");
  if (names.size() != 1 && static_cast<int>(names.size()) != n)
    throw DomainError("expected 1 or " + std::to_string(n) + " --policy values, got " +
                      std::to_string(names.size()));
  std::vector<PolicySpec> specs;
  for (int i = 0; i < n; ++i)
    specs.push_back(PolicySpec::parse(names[names.size() == 1 ? 0 : i]));
  return specs;
}

std::string trace_name(const std::string& env, std::uint64_t seed) {
  return env + "_seed" + std::to_string(seed) + ".jsonl";
}

void cmd_run(const RunManifest& m) {
  EnvConfig cfg = lookup_env(m.env_id);
  if (m.hide_dij) cfg.observation.interdependence_visible = false;
  const auto specs = agent_specs(m.policies, cfg.n_agents);
  const fs::path dir = out_dir(m.out);
  for (std::uint64_t seed : m.seeds) {
    const EpisodeTrace tr = run_episode(cfg, m.mode, specs, seed);
    const fs::path file = dir / trace_name(m.env_id, seed);
    write_file(file.string(), render_trace(tr));
    json line = summary_json(tr);
    line["file"] = file.string();
    std::cout << line.dump() << '\n';
  }
  write_file((dir / "manifest.json").string(), to_json(m).dump(2) + "\n");
}

RunManifest manifest_of(const Common& o, const std::string& env) {
  RunManifest m;
  m.env_id = env;
  m.mode = parse_reward_mode(o.mode);
  for (const auto& spec : agent_specs(o.policies, lookup_env(env).n_agents))
    m.policies.push_back(spec.name());
  m.seeds = seeds_or_default(o.seeds);
  m.out = o.out.empty() ? "." : o.out;
  m.hide_dij = o.hide_dij;
  return m;
}

void write_common_manifest(const fs::path& dir, const std::string& command,
                           const Common& o, const std::vector<std::string>& envs) {
  json j;
  j["schema_version"] = kTraceSchemaVersion;
  j["command"] = command;
  j["envs"] = envs;
  j["mode"] = o.mode;
  j["policies"] = o.policies;
  j["seeds"] = seeds_or_default(o.seeds);
  j["out"] = dir.string();
  write_file((dir / "manifest.json").string(), j.dump(2) + "\n");
}

std::string csv_number(double x) { return number(x).dump(); }

void cmd_gap(const Common& o) {
  const auto envs = expand_envs(o.envs);
  if (o.policies.size() != 1) throw DomainError("gap takes exactly one --policy");
  const PolicySpec spec = PolicySpec::parse(o.policies[0]);
  const RewardMode mode = parse_reward_mode(o.mode);
  std::ostringstream csv;
  csv << "env,policy,mode,R_A,R_O,Gap%\n";
  for (const auto& id : envs) {
    const GapRow r = evaluate_gap(lookup_env(id), spec, mode, seeds_or_default(o.seeds));
    csv << r.env_id << ',' << r.policy << ',' << to_string(r.mode) << ','
        << csv_number(r.r_algo) << ',' << csv_number(r.r_oracle) << ','
        << csv_number(r.gap_pct) << '\n';
  }
  std::cout << csv.str();
  if (!o.out.empty()) {
    const fs::path dir = out_dir(o.out);
    write_file((dir / "gap.csv").string(), csv.str());
    write_common_manifest(dir, "gap", o, envs);
  }
}

void cmd_sweep(const Common& o) {
  const auto envs = expand_envs(o.envs);
  const RewardMode mode = parse_reward_mode(o.mode);
  const fs::path dir = out_dir(o.out);
  for (const auto& id : envs) {
    const SweepTable t = constant_sweep(id, mode, seeds_or_default(o.seeds));
    const fs::path file = dir / (id + "_sweep.csv");
    write_file(file.string(), sweep_csv(t));
    json line;
    line["env"] = id;
    line["argmax_pct"] = t.argmax_pct;
    line["file"] = file.string();
    std::cout << line.dump() << '\n';
  }
  write_common_manifest(dir, "sweep", o, envs);
}

void cmd_oracle(const Common& o, const std::string& oracle) {
  const auto envs = expand_envs(o.envs);
  json all = json::array();
  for (const auto& id : envs) {
    const EnvConfig& cfg = lookup_env(id);
    const OracleName name = oracle.empty() ? reference_oracle(cfg) : parse_oracle_name(oracle);
    all.push_back(oracle_snippet(solve_oracle(name, cfg)));
  }
  const std::string text = (all.size() == 1 ? all[0] : all).dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    const fs::path dir = out_dir(o.out);
    write_file((dir / "oracle.json").string(), text);
    write_common_manifest(dir, "oracle", o, envs);
  }
}

void cmd_audit(const Common& o, bool temporal) {
  const auto envs = expand_envs(o.envs);
  const RewardMode mode = parse_reward_mode(o.mode);
  const auto seeds = seeds_or_default(o.seeds);
  const fs::path dir = out_dir(o.out);
  json summary;
  summary["kind"] = temporal ? "temporal" : "static";
  summary["mode"] = o.mode;
  summary["reports"] = 0;
  json counts = json::object();
  json tests = json::object();
  int reports = 0;
  for (const auto& id : envs) {
    for (std::uint64_t seed : seeds) {
      json rep;
      if (temporal) {
        const auto r = temporal_audit(lookup_env(id), seed, mode);
        rep = to_json(r);
        for (const auto& x : r.results) {
          const std::string k(to_string(x.strategy.kind));
          tests[k] = tests.value(k, 0) + 1;
          counts[k] = counts.value(k, 0) + (x.outcome.exploitative ? 1 : 0);
        }
      } else {
        const auto r = static_audit(id, mode, seed);
        rep = to_json(r);
        tests["deviation"] = tests.value("deviation", 0) + static_cast<int>(r.deviations.size());
        counts["deviation"] = counts.value("deviation", 0) + r.exploitative_count();
      }
      ++reports;
      write_file((dir / (id + "_seed" + std::to_string(seed) + "_" +
                         (temporal ? "temporal" : "static") + ".json"))
                     .string(),
                 rep.dump(2) + "\n");
    }
  }
  summary["reports"] = reports;
  summary["tests"] = tests;
  summary["exploitative"] = counts;
  write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  write_common_manifest(dir, temporal ? "audit temporal" : "audit static", o, envs);
  std::cout << summary.dump() << '\n';
}

void cmd_registry(bool dump) {
  for (const auto& cfg : registry()) {
    if (dump) {
      std::cout << to_json(cfg).dump() << '\n';
    } else {
      std::cout << cfg.env_id << '\t' << to_string(cfg.tier) << '\t' << cfg.n_agents
                << " agents\t" << cfg.horizon << " steps\n";
    }
  }
}

int cmd_compare(const std::string& a, const std::string& b, double rtol) {
  const CompareResult r = compare_traces(read_file(a), read_file(b), rtol);
  json j;
  j["equal"] = r.equal;
  if (!r.equal) {
    j["line"] = r.line;
    j["detail"] = r.detail;
  }
  std::cout << j.dump() << '\n';
  return r.equal ? 0 : 1;
}

int report_error(const std::string& kind, const std::string& message, int code) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coopsim: mixed-motive multi-agent simulation"};
  app.require_subcommand(1);

  Common run_o, sweep_o, oracle_o, gap_o, static_o, temporal_o;
  std::string manifest_path, oracle_name, cmp_a, cmp_b;
  double rtol = 1e-7;
  bool dump = false;

  auto* run = app.add_subcommand("run", "run episodes and write JSONL traces");
  add_env(run, run_o, false);
  add_mode(run, run_o);
  run->add_option("--policy", run_o.policies, "policy per agent, repeatable (one value applies to all)");
  add_seeds(run, run_o);
  run->add_option("--out", run_o.out, "output directory");
  run->add_flag("--hide-dij", run_o.hide_dij, "hide interdependence from observations");
  run->add_option("--manifest", manifest_path, "replay a manifest.json (other flags ignored except --out)");

  auto* sweep = app.add_subcommand("sweep", "constant-fraction sweep 0..100%");
  add_env(sweep, sweep_o);
  add_mode(sweep, sweep_o);
  add_seeds(sweep, sweep_o);
  sweep->add_option("--out", sweep_o.out, "output directory");

  auto* oracle = app.add_subcommand("oracle", "solve an analytic oracle");
  add_env(oracle, oracle_o);
  oracle->add_option("--oracle", oracle_name, "oracle name (default: the env's reference oracle)");
  oracle->add_option("--out", oracle_o.out, "output directory");

  auto* gap = app.add_subcommand("gap", "Gap% of a policy against the reference oracle");
  add_env(gap, gap_o);
  add_mode(gap, gap_o);
  gap->add_option("--policy", gap_o.policies, "policy played by every agent")->required();
  add_seeds(gap, gap_o);
  gap->add_option("--out", gap_o.out, "output directory");

  auto* audit = app.add_subcommand("audit", "behavioral audits");
  audit->require_subcommand(1);
  auto* st = audit->add_subcommand("static", "static deviation audit");
  auto* te = audit->add_subcommand("temporal", "temporal defection audit");
  for (auto [c, o] : {std::pair{st, &static_o}, std::pair{te, &temporal_o}}) {
    add_env(c, *o);
    add_mode(c, *o);
    add_seeds(c, *o);
    c->add_option("--out", o->out, "output directory");
  }

  auto* reg = app.add_subcommand("registry", "list registered environments");
  reg->add_flag("--dump", dump, "print each config as a JSON line");

  auto* cmp = app.add_subcommand("compare", "compare two traces with a relative tolerance");
  cmp->add_option("a", cmp_a)->required();
  cmp->add_option("b", cmp_b)->required();
  cmp->add_option("--rtol", rtol, "relative tolerance")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what(), 2);
  }

  try {
    if (*run) {
      if (!manifest_path.empty()) {
        RunManifest m = manifest_from_json(json::parse(read_file(manifest_path)));
        if (!run_o.out.empty()) m.out = run_o.out;
        cmd_run(m);
      } else {
        if (run_o.envs.size() != 1) throw DomainError("run takes exactly one --env");
        cmd_run(manifest_of(run_o, run_o.envs[0]));
      }
    } else if (*sweep) {
      cmd_sweep(sweep_o);
    } else if (*oracle) {
      cmd_oracle(oracle_o, oracle_name);
    } else if (*gap) {
      cmd_gap(gap_o);
    } else if (*st) {
      cmd_audit(static_o, false);
    } else if (*te) {
      cmd_audit(temporal_o, true);
    } else if (*reg) {
      cmd_registry(dump);
    } else if (*cmp) {
      return cmd_compare(cmp_a, cmp_b, rtol);
    }
  } catch (const RegistryError& e) {
    return report_error("RegistryError", e.what(), 3);
  } catch (const ConvergenceError& e) {
    return report_error("ConvergenceError", e.what(), 4);
  } catch (const DomainError& e) {
    return report_error("DomainError", e.what(), 1);
  } catch (const ProtocolError& e) {
    return report_error("ProtocolError", e.what(), 1);
  } catch (const json::exception& e) {
    return report_error("ParseError", e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("Error", e.what(), 1);
  }
  return 0;
}
