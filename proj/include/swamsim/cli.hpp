#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "swamsim/engine.hpp"
#include "swamsim/report.hpp"
#include "swamsim/scenario.hpp"
#include "swamsim/types.hpp"
#include "swamsim/workload.hpp"

namespace swamsim {

inline int log_level() {  // 0 quiet, 1 info, 2 debug (SWAMSIM_LOG)
  const char* env = std::getenv("SWAMSIM_LOG");
  if (!env) return 1;
  std::string v = env;
  if (v == "quiet" || v == "0") return 0;
  if (v == "debug" || v == "2") return 2;
  return 1;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "swamsim: " << msg << "\n";
}

inline EngineOptions engine_options_from_env() {
  EngineOptions opts;
  opts.full_audit_stride = 200000;
  if (log_level() >= 2) opts.swap_sample_cap = 20000;
  return opts;
}

inline std::vector<std::string> app_names(const ScenarioConfig& cfg) {
  std::vector<std::string> names;
  names.reserve(cfg.workload.apps.size());
  for (const AppSpec& s : cfg.workload.apps) names.push_back(s.name);
  return names;
}

struct LoadedScenario {
  ScenarioConfig cfg;
  Trace trace;
};

inline std::optional<LoadedScenario> load_and_generate(
    const std::string& scenario_path, std::optional<std::uint64_t> seed_override,
    std::optional<Policy> policy_override) {
  auto loaded = load_scenario_file(scenario_path);
  if (!loaded.ok()) {
    std::cerr << "swamsim: invalid scenario: " << loaded.msg << "\n";
    return std::nullopt;
  }
  LoadedScenario out;
  out.cfg = std::move(loaded.value);
  if (seed_override) out.cfg.seed = *seed_override;
  if (policy_override) out.cfg.policy = *policy_override;
  auto valid = validate_config(out.cfg);
  if (!valid.ok()) {
    std::cerr << "swamsim: invalid scenario: " << valid.msg << "\n";
    return std::nullopt;
  }
  auto trace = generate(out.cfg);
  if (!trace.ok()) {
    std::cerr << "swamsim: trace generation failed: " << trace.msg << "\n";
    return std::nullopt;
  }
  out.trace = std::move(trace.value);
  return out;
}

/// `run`: simulate one policy, write metrics.csv / events.jsonl / summary.json.
/// `trace_out` exports the generated trace for regression pinning;
/// `trace_in` replays a previously exported trace instead of generating.
inline int cmd_run(const std::string& scenario_path, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override = std::nullopt,
                   std::optional<Policy> policy_override = std::nullopt,
                   const std::string& trace_out = {}, const std::string& trace_in = {}) {
  auto loaded = load_and_generate(scenario_path, seed_override, policy_override);
  if (!loaded) return 1;
  if (!trace_in.empty()) {
    std::ifstream in(trace_in, std::ios::binary);
    if (!in) {
      std::cerr << "swamsim: cannot open trace: " << trace_in << "\n";
      return 1;
    }
    std::string text(std::istreambuf_iterator<char>(in), {});
    auto parsed = parse_trace(text);
    if (!parsed.ok()) {
      std::cerr << "swamsim: bad trace: " << parsed.msg << "\n";
      return 1;
    }
    loaded->trace = std::move(parsed.value);
  }
  if (!trace_out.empty()) {
    std::ofstream out(trace_out, std::ios::binary);
    out << serialize_trace(loaded->trace);
    if (!out) {
      std::cerr << "swamsim: cannot write trace: " << trace_out << "\n";
      return 1;
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  log_info(std::string("run policy=") + to_string(loaded->cfg.policy) + " events=" +
           std::to_string(loaded->trace.events.size()));
  MetricsLog log = replay(loaded->trace, loaded->cfg, loaded->cfg.policy,
                          engine_options_from_env());

  auto names = app_names(loaded->cfg);
  write_metrics_csv(out_dir + "/metrics.csv", {&log});
  write_events_jsonl(out_dir + "/events.jsonl", log, names);
  std::ofstream sum(out_dir + "/summary.json", std::ios::binary);
  sum << summary_json(log, names).dump(2) << "\n";
  if (log.panicked) {
    std::cerr << "swamsim: system panic at t=" << log.panic_time
              << " ms; partial outputs written\n";
    return 2;
  }
  return 0;
}

/// `compare`: run several policies over the SAME generated trace and
/// write side-by-side results.
inline int cmd_compare(const std::string& scenario_path,
                       const std::vector<std::string>& policy_names,
                       const std::string& out_dir,
                       std::optional<std::uint64_t> seed_override = std::nullopt) {
  if (policy_names.size() < 2) {
    std::cerr << "swamsim: compare needs at least two policies\n";
    return 1;
  }
  std::vector<Policy> policies;
  for (const std::string& s : policy_names) {
    Policy p;
    if (!parse_policy(s, p)) {
      std::cerr << "swamsim: unknown policy: " << s << "\n";
      return 1;
    }
    policies.push_back(p);
  }
  auto loaded = load_and_generate(scenario_path, seed_override, std::nullopt);
  if (!loaded) return 1;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  std::vector<MetricsLog> logs;
  logs.reserve(policies.size());
  for (Policy p : policies) {
    log_info(std::string("compare: running ") + to_string(p));
    logs.push_back(replay(loaded->trace, loaded->cfg, p, engine_options_from_env()));
  }

  auto names = app_names(loaded->cfg);
  std::vector<const MetricsLog*> log_ptrs;
  std::vector<PolicySummary> summaries;
  nlohmann::json per_policy = nlohmann::json::object();
  bool panicked = false;
  for (const MetricsLog& log : logs) {
    log_ptrs.push_back(&log);
    summaries.push_back(summarize(log));
    per_policy[to_string(log.policy)] = summary_json(log, names);
    panicked = panicked || log.panicked;
  }
  write_metrics_csv(out_dir + "/metrics.csv", log_ptrs);
  write_compare_csv(out_dir + "/compare.csv", summaries);
  std::ofstream sum(out_dir + "/summary.json", std::ios::binary);
  sum << per_policy.dump(2) << "\n";
  return panicked ? 2 : 0;
}

/// `validate`: schema + invariant pre-checks; prints normalized config.
inline int cmd_validate(const std::string& scenario_path) {
  auto loaded = load_scenario_file(scenario_path);
  if (!loaded.ok()) {
    std::cerr << "swamsim: invalid scenario: " << loaded.msg << "\n";
    return 1;
  }
  auto valid = validate_config(loaded.value);
  if (!valid.ok()) {
    std::cerr << "swamsim: invalid scenario: " << valid.msg << "\n";
    return 1;
  }
  std::cout << scenario_to_json(loaded.value).dump(2) << "\n";
  return 0;
}

/// `init`: emit a built-in reference scenario file.
inline int cmd_init(const std::string& profile, std::uint64_t seed,
                    const std::string& out_path) {
  DeviceProfile p;
  if (profile == "low-end") p = DeviceProfile::LOW_END;
  else if (profile == "high-end") p = DeviceProfile::HIGH_END;
  else {
    std::cerr << "swamsim: unknown profile (expected low-end or high-end)\n";
    return 1;
  }
  ScenarioConfig cfg = default_scenario(p, seed);
  auto st = save_scenario_file(cfg, out_path);
  if (!st.ok()) {
    std::cerr << "swamsim: " << st.msg << "\n";
    return 1;
  }
  log_info("wrote " + out_path);
  return 0;
}

}  // namespace swamsim
