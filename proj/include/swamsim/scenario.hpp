#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "swamsim/types.hpp"
#include "swamsim/workload.hpp"

namespace swamsim {

using nlohmann::json;

inline json scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["seed"] = c.seed;
  j["policy"] = to_string(c.policy);

  j["device"] = {
      {"ram_mb", c.device.ram_bytes / mib(1)},
      {"zram_mb", c.device.zram_bytes / mib(1)},
      {"storage_mb", c.device.storage_bytes / mib(1)},
      {"nand_swap_mb", c.device.nand_partition_bytes / mib(1)},
      {"storage_used_other_mb", c.device.storage_used_other_bytes / mib(1)},
      {"compression_ratio", static_cast<double>(c.device.compression_ratio_mill) / 1000.0},
  };
  j["swap"] = {
      {"recency_window_ms", c.swap.recency_window_ms},
      {"ref_count_threshold", c.swap.ref_count_threshold},
      {"unmap_unit_kb", c.swap.unmap_unit_bytes / 1024},
      {"fixed_unmap_unit_kb", c.swap.fixed_unmap_unit_bytes / 1024},
      {"swam_file_capacity_pages", c.swap.swam_file_capacity_pages},
      {"storage_read_mb_s", c.swap.storage_read_bw / 1000.0},
      {"storage_write_mb_s", c.swap.storage_write_bw / 1000.0},
      {"zram_in_cost_ms", c.swap.zram_in_cost_ms},
      {"zram_out_cost_ms", c.swap.zram_out_cost_ms},
      {"per_check_cost_ms", c.swap.per_check_cost_ms},
      {"per_page_unmap_cost_ms", c.swap.per_page_unmap_cost_ms},
      {"preempt_service_ms", c.swap.preempt_service_ms},
      {"pressure_fault_penalty_ms", c.swap.pressure_fault_penalty_ms},
  };
  j["cleaner"] = {
      {"isop_interval_ms", c.cleaner.isop_interval_ms},
      {"isop_cold_threshold_ms", c.cleaner.isop_cold_threshold_ms},
      {"storage_low_watermark", c.cleaner.storage_low_watermark},
      {"isop_fast_interval_ms", c.cleaner.isop_fast_interval_ms},
  };
  j["thresholds"] = {
      {"swap", c.thresholds.swap_threshold},
      {"lmkd", c.thresholds.lmkd_threshold},
      {"oomk", c.thresholds.oomk_threshold},
      {"hysteresis", c.thresholds.hysteresis},
      {"lmkd_min_band", to_string(c.thresholds.lmkd_min_band)},
  };
  j["estimators"] = {
      {"base_restart_ms", c.estimators.base_restart_ms},
      {"so_weight", c.estimators.so_weight},
      {"xml_weight", c.estimators.xml_weight},
      {"warm_start_ms", c.estimators.warm_start_ms},
  };

  json apps = json::array();
  for (const AppSpec& s : c.workload.apps) {
    json a = {
        {"name", s.name},
        {"role", s.role == Role::FOREGROUND ? "FOREGROUND" : "BACKGROUND"},
        {"idle_band", to_string(s.idle_band)},
        {"time_critical", s.time_critical},
        {"working_set_mb", s.working_set_mb},
        {"so_fraction", s.so_fraction},
        {"file_pages", s.file_pages},
        {"so_sharing_group", s.so_sharing_group},
        {"background_growth_kb_per_min", s.background_growth_kb_per_min},
        {"n_symbols", s.n_symbols},
        {"symbol_ts_mean_ms", s.symbol_ts_mean_ms},
        {"tl_ms", s.tl_ms},
        {"xml_total_ms", s.xml_total_ms},
    };
    if (s.batch) a["batch"] = true;
    if (s.root) a["root"] = true;
    if (s.hardware) a["hardware"] = true;
    if (s.is_init) a["is_init"] = true;
    if (s.so_pages >= 0) a["so_pages"] = s.so_pages;
    if (s.anon_pages >= 0) a["anon_pages"] = s.anon_pages;
    if (s.has_explicit_symbols) {
      json syms = json::array();
      for (const Symbol& sym : s.explicit_symbols)
        syms.push_back(json::array({sym.ts_ms, sym.tr_ms}));
      a["symbols"] = std::move(syms);
    }
    if (s.xml_layout_alter_ms >= 0.0) a["xml_layout_alter_ms"] = s.xml_layout_alter_ms;
    if (s.xml_render_ms >= 0.0) a["xml_render_ms"] = s.xml_render_ms;
    apps.push_back(std::move(a));
  }
  j["workload"] = {
      {"days", c.workload.days},
      {"burst_minutes", c.workload.burst_minutes},
      {"burst_offset_minutes", c.workload.burst_offset_minutes},
      {"session_access_hz", c.workload.session_access_hz},
      {"so_touch_share", c.workload.so_touch_share},
      {"hot_fraction", c.workload.hot_fraction},
      {"hot_weight", c.workload.hot_weight},
      {"idle_touch_interval_ms", c.workload.idle_touch_interval_ms},
      {"idle_touch_pages", c.workload.idle_touch_pages},
      {"grow_tick_ms", c.workload.grow_tick_ms},
      {"group_shared_fraction", c.workload.group_shared_fraction},
      {"apps", std::move(apps)},
  };
  return j;
}

namespace detail {

/// Field extraction with path-tagged errors; the first failure wins.
struct JsonReader {
  std::string err;

  bool fail(const std::string& path) {
    if (err.empty()) err = path;
    return false;
  }
  template <typename T>
  bool get(const json& j, const std::string& path, const char* key, T& out) {
    auto it = j.find(key);
    if (it == j.end()) return true;  // keep default
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      return fail(path + "." + key);
    }
    return true;
  }
};

}  // namespace detail

inline Result<ScenarioConfig> scenario_from_json(const json& j) {
  using R = Result<ScenarioConfig>;
  ScenarioConfig c;
  detail::JsonReader rd;

  rd.get(j, "", "schema_version", c.schema_version);
  rd.get(j, "", "seed", c.seed);
  std::string policy = to_string(c.policy);
  rd.get(j, "", "policy", policy);
  if (!parse_policy(policy, c.policy)) return R::failure(Err::ConfigInvalid, "policy");

  if (j.contains("device")) {
    const json& d = j["device"];
    std::int64_t ram_mb = c.device.ram_bytes / mib(1), zram_mb = c.device.zram_bytes / mib(1),
                 st_mb = c.device.storage_bytes / mib(1),
                 nand_mb = c.device.nand_partition_bytes / mib(1),
                 other_mb = c.device.storage_used_other_bytes / mib(1);
    double ratio = static_cast<double>(c.device.compression_ratio_mill) / 1000.0;
    rd.get(d, "device", "ram_mb", ram_mb);
    rd.get(d, "device", "zram_mb", zram_mb);
    rd.get(d, "device", "storage_mb", st_mb);
    rd.get(d, "device", "nand_swap_mb", nand_mb);
    rd.get(d, "device", "storage_used_other_mb", other_mb);
    rd.get(d, "device", "compression_ratio", ratio);
    c.device.ram_bytes = mib(ram_mb);
    c.device.zram_bytes = mib(zram_mb);
    c.device.storage_bytes = mib(st_mb);
    c.device.nand_partition_bytes = mib(nand_mb);
    c.device.storage_used_other_bytes = mib(other_mb);
    c.device.compression_ratio_mill = static_cast<std::int64_t>(std::llround(ratio * 1000.0));
  }
  if (j.contains("swap")) {
    const json& s = j["swap"];
    std::int64_t unit_kb = c.swap.unmap_unit_bytes / 1024,
                 fixed_kb = c.swap.fixed_unmap_unit_bytes / 1024;
    double read_mb_s = c.swap.storage_read_bw / 1000.0,
           write_mb_s = c.swap.storage_write_bw / 1000.0;
    rd.get(s, "swap", "recency_window_ms", c.swap.recency_window_ms);
    rd.get(s, "swap", "ref_count_threshold", c.swap.ref_count_threshold);
    rd.get(s, "swap", "unmap_unit_kb", unit_kb);
    rd.get(s, "swap", "fixed_unmap_unit_kb", fixed_kb);
    rd.get(s, "swap", "swam_file_capacity_pages", c.swap.swam_file_capacity_pages);
    rd.get(s, "swap", "storage_read_mb_s", read_mb_s);
    rd.get(s, "swap", "storage_write_mb_s", write_mb_s);
    rd.get(s, "swap", "zram_in_cost_ms", c.swap.zram_in_cost_ms);
    rd.get(s, "swap", "zram_out_cost_ms", c.swap.zram_out_cost_ms);
    rd.get(s, "swap", "per_check_cost_ms", c.swap.per_check_cost_ms);
    rd.get(s, "swap", "per_page_unmap_cost_ms", c.swap.per_page_unmap_cost_ms);
    rd.get(s, "swap", "preempt_service_ms", c.swap.preempt_service_ms);
    rd.get(s, "swap", "pressure_fault_penalty_ms", c.swap.pressure_fault_penalty_ms);
    c.swap.unmap_unit_bytes = unit_kb * 1024;
    c.swap.fixed_unmap_unit_bytes = fixed_kb * 1024;
    c.swap.storage_read_bw = read_mb_s * 1000.0;
    c.swap.storage_write_bw = write_mb_s * 1000.0;
  }
  if (j.contains("cleaner")) {
    const json& s = j["cleaner"];
    rd.get(s, "cleaner", "isop_interval_ms", c.cleaner.isop_interval_ms);
    rd.get(s, "cleaner", "isop_cold_threshold_ms", c.cleaner.isop_cold_threshold_ms);
    rd.get(s, "cleaner", "storage_low_watermark", c.cleaner.storage_low_watermark);
    rd.get(s, "cleaner", "isop_fast_interval_ms", c.cleaner.isop_fast_interval_ms);
  }
  if (j.contains("thresholds")) {
    const json& s = j["thresholds"];
    rd.get(s, "thresholds", "swap", c.thresholds.swap_threshold);
    rd.get(s, "thresholds", "lmkd", c.thresholds.lmkd_threshold);
    rd.get(s, "thresholds", "oomk", c.thresholds.oomk_threshold);
    rd.get(s, "thresholds", "hysteresis", c.thresholds.hysteresis);
    std::string band = to_string(c.thresholds.lmkd_min_band);
    rd.get(s, "thresholds", "lmkd_min_band", band);
    if (!parse_band(band, c.thresholds.lmkd_min_band))
      return R::failure(Err::ConfigInvalid, "thresholds.lmkd_min_band");
  }
  if (j.contains("estimators")) {
    const json& s = j["estimators"];
    rd.get(s, "estimators", "base_restart_ms", c.estimators.base_restart_ms);
    rd.get(s, "estimators", "so_weight", c.estimators.so_weight);
    rd.get(s, "estimators", "xml_weight", c.estimators.xml_weight);
    rd.get(s, "estimators", "warm_start_ms", c.estimators.warm_start_ms);
  }
  if (j.contains("workload")) {
    const json& w = j["workload"];
    rd.get(w, "workload", "days", c.workload.days);
    rd.get(w, "workload", "burst_minutes", c.workload.burst_minutes);
    rd.get(w, "workload", "burst_offset_minutes", c.workload.burst_offset_minutes);
    rd.get(w, "workload", "session_access_hz", c.workload.session_access_hz);
    rd.get(w, "workload", "so_touch_share", c.workload.so_touch_share);
    rd.get(w, "workload", "hot_fraction", c.workload.hot_fraction);
    rd.get(w, "workload", "hot_weight", c.workload.hot_weight);
    rd.get(w, "workload", "idle_touch_interval_ms", c.workload.idle_touch_interval_ms);
    rd.get(w, "workload", "idle_touch_pages", c.workload.idle_touch_pages);
    rd.get(w, "workload", "grow_tick_ms", c.workload.grow_tick_ms);
    rd.get(w, "workload", "group_shared_fraction", c.workload.group_shared_fraction);
    if (w.contains("apps")) {
      if (!w["apps"].is_array()) return R::failure(Err::ConfigInvalid, "workload.apps");
      c.workload.apps.clear();
      int idx = 0;
      for (const json& aj : w["apps"]) {
        std::string path = "workload.apps[" + std::to_string(idx) + "]";
        AppSpec s;
        rd.get(aj, path, "name", s.name);
        std::string role = "BACKGROUND";
        rd.get(aj, path, "role", role);
        if (role == "FOREGROUND") s.role = Role::FOREGROUND;
        else if (role == "BACKGROUND") s.role = Role::BACKGROUND;
        else return R::failure(Err::ConfigInvalid, path + ".role");
        std::string band = to_string(s.idle_band);
        rd.get(aj, path, "idle_band", band);
        if (!parse_band(band, s.idle_band))
          return R::failure(Err::ConfigInvalid, path + ".idle_band");
        rd.get(aj, path, "time_critical", s.time_critical);
        rd.get(aj, path, "batch", s.batch);
        rd.get(aj, path, "root", s.root);
        rd.get(aj, path, "hardware", s.hardware);
        rd.get(aj, path, "is_init", s.is_init);
        rd.get(aj, path, "working_set_mb", s.working_set_mb);
        rd.get(aj, path, "so_fraction", s.so_fraction);
        rd.get(aj, path, "so_pages", s.so_pages);
        rd.get(aj, path, "anon_pages", s.anon_pages);
        rd.get(aj, path, "file_pages", s.file_pages);
        rd.get(aj, path, "so_sharing_group", s.so_sharing_group);
        rd.get(aj, path, "background_growth_kb_per_min", s.background_growth_kb_per_min);
        rd.get(aj, path, "n_symbols", s.n_symbols);
        rd.get(aj, path, "symbol_ts_mean_ms", s.symbol_ts_mean_ms);
        rd.get(aj, path, "tl_ms", s.tl_ms);
        rd.get(aj, path, "xml_total_ms", s.xml_total_ms);
        rd.get(aj, path, "xml_layout_alter_ms", s.xml_layout_alter_ms);
        rd.get(aj, path, "xml_render_ms", s.xml_render_ms);
        if (aj.contains("symbols")) {
          if (!aj["symbols"].is_array())
            return R::failure(Err::ConfigInvalid, path + ".symbols");
          s.has_explicit_symbols = true;
          int k = 0;
          for (const json& sym : aj["symbols"]) {
            if (!sym.is_array() || sym.size() != 2 || !sym[0].is_number() ||
                !sym[1].is_number())
              return R::failure(Err::ConfigInvalid,
                                path + ".symbols[" + std::to_string(k) + "]");
            s.explicit_symbols.push_back({sym[0].get<double>(), sym[1].get<double>()});
            k++;
          }
        }
        c.workload.apps.push_back(std::move(s));
        idx++;
      }
    }
  }
  if (!rd.err.empty()) return R::failure(Err::ConfigInvalid, rd.err);
  return R::success(std::move(c));
}

/// Schema and invariant pre-checks; the message names the offending
/// field path.
inline Status validate_config(const ScenarioConfig& c) {
  auto bad = [](const std::string& m) { return Status::failure(Err::ConfigInvalid, m); };
  if (c.schema_version != 1) return bad("schema_version: unsupported");
  if (c.device.ram_bytes <= 0) return bad("device.ram_mb: must be positive");
  if (c.device.zram_bytes < 0) return bad("device.zram_mb: negative");
  if (c.device.zram_bytes > c.device.ram_bytes)
    return bad("device.zram_mb: exceeds device.ram_mb");
  if (c.device.compression_ratio_mill <= 1000)
    return bad("device.compression_ratio: must be > 1");
  if (c.device.storage_bytes <= 0) return bad("device.storage_mb: must be positive");
  if (c.device.storage_used_other_bytes + c.device.nand_partition_bytes >
      c.device.storage_bytes)
    return bad("device.storage_mb: smaller than reserved space");
  if (c.swap.recency_window_ms < 0) return bad("swap.recency_window_ms: negative");
  if (c.swap.ref_count_threshold < 1) return bad("swap.ref_count_threshold: must be >= 1");
  if (c.swap.unmap_unit_bytes < page_bytes || c.swap.unmap_unit_bytes % page_bytes != 0)
    return bad("swap.unmap_unit_kb: must be a positive multiple of 4 KiB");
  if (c.swap.fixed_unmap_unit_bytes < page_bytes ||
      c.swap.fixed_unmap_unit_bytes % page_bytes != 0)
    return bad("swap.fixed_unmap_unit_kb: must be a positive multiple of 4 KiB");
  if (c.swap.swam_file_capacity_pages < 1)
    return bad("swap.swam_file_capacity_pages: must be >= 1");
  if (c.swap.storage_read_bw <= 0.0) return bad("swap.storage_read_mb_s: must be positive");
  if (c.swap.storage_write_bw <= 0.0) return bad("swap.storage_write_mb_s: must be positive");
  if (c.swap.zram_in_cost_ms < 0.0 || c.swap.zram_out_cost_ms < 0.0)
    return bad("swap.zram_in_cost_ms: negative");
  if (c.cleaner.isop_fast_interval_ms >= c.cleaner.isop_interval_ms)
    return bad("cleaner.isop_fast_interval_ms: must be shorter than isop_interval_ms");
  if (c.cleaner.storage_low_watermark <= 0.0 || c.cleaner.storage_low_watermark >= 1.0)
    return bad("cleaner.storage_low_watermark: must be in (0, 1)");
  if (!(c.thresholds.swap_threshold > 0.0 &&
        c.thresholds.swap_threshold < c.thresholds.lmkd_threshold &&
        c.thresholds.lmkd_threshold <= c.thresholds.oomk_threshold &&
        c.thresholds.oomk_threshold <= 1.0))
    return bad("thresholds: require 0 < swap < lmkd <= oomk <= 1");
  if (c.thresholds.hysteresis < 0.0 || c.thresholds.hysteresis >= c.thresholds.swap_threshold)
    return bad("thresholds.hysteresis: out of range");
  if (c.estimators.base_restart_ms < 0.0) return bad("estimators.base_restart_ms: negative");
  if (c.workload.days < 1) return bad("workload.days: must be >= 1");
  if (c.workload.burst_minutes < 0) return bad("workload.burst_minutes: negative");
  if (c.workload.apps.empty()) return bad("workload.apps: empty");

  for (std::size_t i = 0; i < c.workload.apps.size(); ++i) {
    const AppSpec& s = c.workload.apps[i];
    std::string path = "workload.apps[" + std::to_string(i) + "] (" + s.name + ")";
    if (s.name.empty()) return bad(path + ": name empty");
    if (s.working_set_mb <= 0 && s.so_pages < 0)
      return bad(path + ": working_set_mb must be positive");
    if (s.so_fraction < 0.0 || s.so_fraction > 1.0)
      return bad(path + ": so_fraction out of [0,1]");
    if (spec_anon_pages(s) < 0) return bad(path + ": negative derived anon_pages");
    if (s.so_sharing_group < 0 || s.so_sharing_group >= 64)
      return bad(path + ": so_sharing_group out of range");
    if (s.background_growth_kb_per_min < 0.0)
      return bad(path + ": background_growth_kb_per_min negative");
    if (s.n_symbols < 0) return bad(path + ": n_symbols negative");
    if (s.symbol_ts_mean_ms < 0.0) return bad(path + ": symbol_ts_mean_ms negative");
    if (s.tl_ms < 0.0) return bad(path + ": tl_ms negative");
    if (s.xml_total_ms < 0.0) return bad(path + ": xml_total_ms negative");
    for (std::size_t k = 0; k < s.explicit_symbols.size(); ++k) {
      if (s.explicit_symbols[k].ts_ms < 0.0)
        return bad(path + ": symbols[" + std::to_string(k) + "].ts is negative");
      if (s.explicit_symbols[k].tr_ms < 0.0)
        return bad(path + ": symbols[" + std::to_string(k) + "].tr is negative");
    }
  }
  return ok_status();
}

inline Result<ScenarioConfig> load_scenario_file(const std::string& path) {
  using R = Result<ScenarioConfig>;
  std::ifstream in(path);
  if (!in) return R::failure(Err::ConfigInvalid, "cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    return R::failure(Err::ConfigInvalid, std::string("json parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

inline Status save_scenario_file(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) return Status::failure(Err::ConfigInvalid, "cannot write: " + path);
  out << scenario_to_json(cfg).dump(2) << "\n";
  return ok_status();
}

}  // namespace swamsim
