#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swamsim/engine.hpp"
#include "swamsim/types.hpp"

namespace swamsim {

/// Locale-independent fixed-point formatting; output is reproducible
/// byte-for-byte for a given value.
inline std::string fmt_fixed(double v, int decimals) {
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  std::int64_t n = static_cast<std::int64_t>(std::llround(v * static_cast<double>(scale)));
  bool neg = n < 0;
  if (neg) n = -n;
  std::string frac = std::to_string(n % scale);
  while (static_cast<int>(frac.size()) < decimals) frac.insert(frac.begin(), '0');
  std::string out = (neg ? "-" : "") + std::to_string(n / scale);
  if (decimals > 0) out += "." + frac;
  return out;
}

inline const char* metrics_csv_header() {
  return "policy,day,kills_cumulative,mean_free_mb,mean_launch_ms,mean_response_ms,"
         "zram_used_mb,swam_used_mb\n";
}

inline std::string metrics_csv_row(const DayRow& r) {
  std::string out;
  out += to_string(r.policy);
  out += "," + std::to_string(r.day);
  out += "," + std::to_string(r.kills_cumulative);
  out += "," + fmt_fixed(r.mean_free_mb, 3);
  out += "," + fmt_fixed(r.mean_launch_ms, 3);
  out += "," + fmt_fixed(r.mean_response_ms, 6);
  out += "," + fmt_fixed(r.zram_used_mb, 3);
  out += "," + fmt_fixed(r.swam_used_mb, 3);
  out += "\n";
  return out;
}

inline bool write_metrics_csv(const std::string& path,
                              const std::vector<const MetricsLog*>& logs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << metrics_csv_header();
  for (const MetricsLog* log : logs)
    for (const DayRow& r : log->days) out << metrics_csv_row(r);
  return static_cast<bool>(out);
}

/// Overall per-policy aggregates used by the comparison report.
struct PolicySummary {
  Policy policy = Policy::SWAM;
  std::uint64_t trace_hash = 0;
  std::int64_t kills_total = 0;
  int first_kill_day = -1;  // -1: never
  double mean_free_mb = 0.0;
  double mean_launch_ms = 0.0;
  double mean_response_ms = 0.0;
  std::int64_t cold_launches = 0;
  bool panicked = false;
};

inline PolicySummary summarize(const MetricsLog& log) {
  PolicySummary s;
  s.policy = log.policy;
  s.trace_hash = log.trace_hash;
  s.kills_total = static_cast<std::int64_t>(log.kills.size());
  s.first_kill_day =
      log.first_kill_time < 0 ? -1 : static_cast<int>(log.first_kill_time / day_ms) + 1;
  double free_sum = 0.0;
  for (const DayRow& r : log.days) free_sum += r.mean_free_mb;
  s.mean_free_mb = log.days.empty() ? 0.0 : free_sum / static_cast<double>(log.days.size());
  s.mean_launch_ms = log.mean_launch_ms();
  s.mean_response_ms = log.mean_response_ms();
  s.cold_launches = log.cold_launches;
  s.panicked = log.panicked;
  return s;
}

/// compare.csv: one row per policy plus ratio columns against the
/// reference policy (SWAM when present, else the first one).
inline bool write_compare_csv(const std::string& path,
                              const std::vector<PolicySummary>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  std::size_t ref = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].policy == Policy::SWAM) ref = i;
  const PolicySummary& r0 = rows[ref];
  out << "policy,trace_hash,kills_total,first_kill_day,mean_free_mb,mean_launch_ms,"
         "mean_response_ms,cold_launches,panicked,kills_ratio_vs_"
      << to_string(r0.policy) << ",launch_speedup_pct,response_speedup_pct\n";
  for (const PolicySummary& r : rows) {
    double kills_ratio = r0.kills_total > 0
                             ? static_cast<double>(r.kills_total) /
                                   static_cast<double>(r0.kills_total)
                             : (r.kills_total > 0 ? -1.0 : 1.0);
    double launch_speedup =
        r.mean_launch_ms > 0.0
            ? (1.0 - r0.mean_launch_ms / r.mean_launch_ms) * 100.0
            : 0.0;
    double response_speedup =
        r.mean_response_ms > 0.0
            ? (1.0 - r0.mean_response_ms / r.mean_response_ms) * 100.0
            : 0.0;
    out << to_string(r.policy) << "," << std::to_string(r.trace_hash) << ","
        << r.kills_total << "," << r.first_kill_day << "," << fmt_fixed(r.mean_free_mb, 3)
        << "," << fmt_fixed(r.mean_launch_ms, 3) << ","
        << fmt_fixed(r.mean_response_ms, 6) << "," << r.cold_launches << ","
        << (r.panicked ? 1 : 0) << "," << fmt_fixed(kills_ratio, 4) << ","
        << fmt_fixed(launch_speedup, 2) << "," << fmt_fixed(response_speedup, 2) << "\n";
  }
  return static_cast<bool>(out);
}

inline nlohmann::json summary_json(const MetricsLog& log,
                                   const std::vector<std::string>& app_names) {
  nlohmann::json j;
  j["policy"] = to_string(log.policy);
  j["trace_hash"] = log.trace_hash;
  j["panicked"] = log.panicked;
  j["kills_total"] = log.kills.size();
  j["first_kill_time_ms"] = log.first_kill_time;
  j["accesses"] = log.accesses;
  j["faults"] = log.faults;
  j["penalized_faults"] = log.penalized_faults;
  j["mean_response_ms"] = log.mean_response_ms();
  j["response_swapin_ms"] = log.response_swapin_ms;
  j["response_penalty_ms"] = log.response_penalty_ms;
  j["response_coldstart_ms"] = log.response_coldstart_ms;
  j["launches_total"] = log.launches_total;
  j["cold_launches"] = log.cold_launches;
  j["mean_launch_ms"] = log.mean_launch_ms();
  j["swap_out_pages"] = log.swap_out_pages;
  j["swap_in_pages"] = log.swap_in_pages;
  j["fast_out_pages"] = log.fast_out_pages;
  j["slow_out_pages"] = log.slow_out_pages;
  j["slow_out_with_zram_room"] = log.slow_out_with_zram_room;
  j["anon_out_with_resident_so"] = log.anon_out_with_resident_so;
  j["unmap_checks_total"] = log.unmap_checks_total;
  j["so_pages_erased"] = log.so_pages_erased;
  j["isop_files_deleted"] = log.isop_files_deleted;
  j["isop_pages_dropped"] = log.isop_pages_dropped;
  j["audit_violations"] = log.audit_violations;
  j["peak_swam_mb"] = static_cast<double>(log.peak_swam_bytes) / static_cast<double>(mib(1));
  j["peak_zram_mb"] =
      static_cast<double>(log.peak_zram_physical) / static_cast<double>(mib(1));
  j["reclaim_stall_ms"] = log.reclaim_stall_ms;

  nlohmann::json kills_by_killer = {{"LMKD", 0}, {"OOMK", 0}, {"EOOM", 0}};
  for (const KillEvent& k : log.kills)
    kills_by_killer[to_string(k.killer)] = kills_by_killer[to_string(k.killer)].get<int>() + 1;
  j["kills_by_killer"] = std::move(kills_by_killer);

  nlohmann::json per_app = nlohmann::json::object();
  for (std::size_t i = 0; i < log.per_app_kills.size() && i < app_names.size(); ++i)
    if (log.per_app_kills[i] > 0) per_app[app_names[i]] = log.per_app_kills[i];
  j["per_app_kills"] = std::move(per_app);
  return j;
}

/// JSON-lines event log: kills, cleaner actions, launches; swap records
/// only when the engine retained a debug sample.
inline bool write_events_jsonl(const std::string& path, const MetricsLog& log,
                               const std::vector<std::string>& app_names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  auto name = [&](AppId a) {
    return a < app_names.size() ? app_names[a] : std::to_string(a);
  };
  for (const KillEvent& k : log.kills) {
    nlohmann::json j = {{"t", k.time},
                        {"type", "kill"},
                        {"killer", to_string(k.killer)},
                        {"app", name(k.app)},
                        {"bytes_reclaimed", k.bytes_reclaimed},
                        {"relaunch_cost_ms", k.relaunch_cost_at_kill}};
    out << j.dump() << "\n";
  }
  for (const CleanRec& c : log.cleans) {
    nlohmann::json j = {{"t", c.time},
                        {"type", c.eraser == EraserKind::SO_ERASER ? "so_erase" : "isop"},
                        {"pages", c.pages},
                        {"bytes", c.bytes}};
    if (c.file != 0) j["file"] = c.file;
    out << j.dump() << "\n";
  }
  for (const LaunchRecord& l : log.launches) {
    nlohmann::json j = {{"t", l.time},
                        {"type", "launch"},
                        {"app", name(l.app)},
                        {"cold", l.cold},
                        {"cost_ms", l.cost_ms}};
    out << j.dump() << "\n";
  }
  for (const SampleRow& s : log.samples) {
    nlohmann::json j = {{"t", s.time},
                        {"type", "sample"},
                        {"free_mb", s.free_mb},
                        {"zram_mb", s.zram_mb},
                        {"swam_mb", s.swam_mb}};
    out << j.dump() << "\n";
  }
  for (const SwapRec& s : log.swap_sample) {
    nlohmann::json j = {{"t", s.time},
                        {"type", s.is_in ? "swap_in" : "swap_out"},
                        {"page", s.page},
                        {"place", to_string(s.place)}};
    out << j.dump() << "\n";
  }
  if (log.panicked) {
    nlohmann::json j = {{"t", log.panic_time}, {"type", "panic"}};
    out << j.dump() << "\n";
  }
  return static_cast<bool>(out);
}

}  // namespace swamsim
