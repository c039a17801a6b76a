#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "swamsim/cleaner.hpp"
#include "swamsim/cost.hpp"
#include "swamsim/killers.hpp"
#include "swamsim/model.hpp"
#include "swamsim/rng.hpp"
#include "swamsim/swap.hpp"
#include "swamsim/types.hpp"

namespace swamsim {

struct AppSpec {
  std::string name;
  Role role = Role::BACKGROUND;
  OomBand idle_band = OomBand::CACHED;
  bool time_critical = false;
  bool batch = false;
  bool root = false;
  bool hardware = false;
  bool is_init = false;

  std::int64_t working_set_mb = 50;
  double so_fraction = 0.36;
  std::int64_t so_pages = -1;    // -1: derived from working set
  std::int64_t anon_pages = -1;  // -1: derived
  std::int64_t file_pages = 0;
  int so_sharing_group = 0;  // 0 = not shared
  double background_growth_kb_per_min = 0.0;

  // Synthesized launch profile; explicit symbol lists override n_symbols.
  std::int64_t n_symbols = 2000;
  double symbol_ts_mean_ms = 0.04;
  double tl_ms = 40.0;
  double xml_total_ms = 250.0;
  bool has_explicit_symbols = false;
  std::vector<Symbol> explicit_symbols;
  double xml_layout_alter_ms = -1.0;  // >=0 overrides the 12/88 split
  double xml_render_ms = -1.0;
};

struct WorkloadConfig {
  int days = 28;
  std::int64_t burst_minutes = 90;
  std::int64_t burst_offset_minutes = 10;
  double session_access_hz = 10.0;
  double so_touch_share = 0.03;   // share of touches aimed at SO pages
  double hot_fraction = 0.10;     // first fraction of each page list is hot
  double hot_weight = 0.90;       // share of touches aimed at the hot set
  TimeMs idle_touch_interval_ms = 5 * minute_ms;
  int idle_touch_pages = 8;
  TimeMs grow_tick_ms = minute_ms;
  double group_shared_fraction = 0.6;
  std::vector<AppSpec> apps;
};

struct ScenarioConfig {
  int schema_version = 1;
  std::uint64_t seed = 42;
  Policy policy = Policy::SWAM;
  DeviceConfig device;
  SwapPolicyConfig swap;
  CleanerConfig cleaner;
  Thresholds thresholds;
  EstimatorConfig estimators;
  WorkloadConfig workload;
};

enum class EventKind : std::uint8_t {
  BOOT_LAUNCH,    // initial cold launch
  DAY_RELAUNCH,   // next-day restart of apps that were killed
  SESSION_START,  // app comes to the foreground (cold or warm)
  SESSION_END,
  ACCESS,  // arg carries the page-selection draw
  GROW,    // arg = number of ANON pages added
};

struct TraceEvent {
  TimeMs t = 0;
  EventKind kind = EventKind::ACCESS;
  AppId app = 0;
  std::uint64_t arg = 0;
};

struct Trace {
  std::uint64_t seed = 0;
  std::vector<TraceEvent> events;
};

/// Derived per-app page counts used when a launch populates memory.
struct LaunchPlan {
  std::int64_t so_pages = 0;
  std::int64_t anon_pages = 0;
  std::int64_t file_pages = 0;
  int group = 0;
  std::int64_t group_shared_pages = 0;  // part of so_pages satisfied by sharing
};

inline std::int64_t spec_so_pages(const AppSpec& s) {
  if (s.so_pages >= 0) return s.so_pages;
  std::int64_t ws_pages = s.working_set_mb * (mib(1) / page_bytes);
  return static_cast<std::int64_t>(static_cast<double>(ws_pages) * s.so_fraction + 0.5);
}

inline std::int64_t spec_anon_pages(const AppSpec& s) {
  if (s.anon_pages >= 0) return s.anon_pages;
  std::int64_t ws_pages = s.working_set_mb * (mib(1) / page_bytes);
  return ws_pages - spec_so_pages(s) - s.file_pages;
}

inline std::vector<LaunchPlan> make_launch_plans(const WorkloadConfig& w) {
  std::vector<LaunchPlan> plans(w.apps.size());
  // Smallest SO footprint per sharing group bounds the shared page count.
  std::vector<std::int64_t> group_min(64, -1);
  for (const AppSpec& s : w.apps) {
    if (s.so_sharing_group <= 0 || s.so_sharing_group >= 64) continue;
    std::int64_t so = spec_so_pages(s);
    auto& gm = group_min[s.so_sharing_group];
    gm = gm < 0 ? so : std::min(gm, so);
  }
  for (std::size_t i = 0; i < w.apps.size(); ++i) {
    const AppSpec& s = w.apps[i];
    LaunchPlan& p = plans[i];
    p.so_pages = spec_so_pages(s);
    p.anon_pages = spec_anon_pages(s);
    p.file_pages = s.file_pages;
    p.group = s.so_sharing_group;
    if (p.group > 0 && p.group < 64 && group_min[p.group] > 0)
      p.group_shared_pages = static_cast<std::int64_t>(
          static_cast<double>(group_min[p.group]) * w.group_shared_fraction);
  }
  return plans;
}

/// Materialize an app (profiles included) from its spec. The symbol list
/// is synthesized with a 65/35 lookup/relocation split unless explicit.
inline App make_app(const AppSpec& s, const EstimatorConfig& est, Rng profile_rng) {
  App a;
  a.name = s.name;
  a.role = s.role;
  a.idle_band = s.idle_band;
  a.band = s.idle_band;
  a.time_critical = s.time_critical;
  a.batch = s.batch;
  a.root = s.root;
  a.hardware = s.hardware;
  a.is_init = s.is_init;

  if (s.has_explicit_symbols) {
    a.so_profile.symbols = s.explicit_symbols;
  } else {
    a.so_profile.symbols.reserve(static_cast<std::size_t>(s.n_symbols));
    for (std::int64_t i = 0; i < s.n_symbols; ++i) {
      double ts = profile_rng.uniform(0.5 * s.symbol_ts_mean_ms, 1.5 * s.symbol_ts_mean_ms);
      a.so_profile.symbols.push_back({ts, ts * (35.0 / 65.0)});
    }
  }
  a.so_profile.tl_ms = s.tl_ms;
  a.so_profile.shared = s.so_sharing_group > 0;
  if (s.xml_layout_alter_ms >= 0.0 && s.xml_render_ms >= 0.0) {
    a.xml_profile = {s.xml_layout_alter_ms, s.xml_render_ms};
  } else {
    a.xml_profile = {0.12 * s.xml_total_ms, 0.88 * s.xml_total_ms};
  }

  a.initial_so_pages = static_cast<std::uint32_t>(spec_so_pages(s));
  a.rebuild_share_ms = so_rebuild_share_ms(a.so_profile, a.initial_so_pages);
  a.relaunch_cost_ms = relaunch_cost(a.so_profile, a.xml_profile, est);
  return a;
}

// -- access draw decoding -----------------------------------------------------

/// How an ACCESS event's draw selects a page. The split into SO/other and
/// hot/cold keeps traces policy-independent while the engine maps the
/// index onto whatever pages the app currently owns.
struct AccessDraw {
  bool so = false;
  bool hot = false;
  std::uint64_t index = 0;
};

inline AccessDraw decode_access(std::uint64_t r, const WorkloadConfig& w) {
  AccessDraw d;
  d.so = (r % 1000) < static_cast<std::uint64_t>(w.so_touch_share * 1000.0);
  r /= 1000;
  d.hot = (r % 1000) < static_cast<std::uint64_t>(w.hot_weight * 1000.0);
  d.index = r / 1000;
  return d;
}

// -- trace generation ---------------------------------------------------------

/// Deterministic event trace for a scenario. The configured policy is
/// deliberately ignored so that one trace can drive every policy.
inline Result<Trace> generate(const ScenarioConfig& cfg) {
  using R = Result<Trace>;
  const WorkloadConfig& w = cfg.workload;
  if (w.days < 1) return R::failure(Err::ConfigInvalid, "workload.days");
  if (w.apps.empty()) return R::failure(Err::ConfigInvalid, "workload.apps");

  Trace trace;
  trace.seed = cfg.seed;
  auto& ev = trace.events;
  Rng access_rng = Rng(cfg.seed).fork(1);
  Rng idle_rng = Rng(cfg.seed).fork(2);

  std::vector<AppId> fg, bg;
  for (AppId i = 0; i < w.apps.size(); ++i) {
    if (w.apps[i].is_init) continue;
    (w.apps[i].role == Role::FOREGROUND ? fg : bg).push_back(i);
  }

  const TimeMs burst_start_off = w.burst_offset_minutes * minute_ms;
  const TimeMs burst_len = w.burst_minutes * minute_ms;
  const TimeMs session_len = fg.empty() ? 0 : burst_len / static_cast<TimeMs>(fg.size());
  const TimeMs access_step =
      w.session_access_hz > 0.0 ? static_cast<TimeMs>(1000.0 / w.session_access_hz) : 0;

  // Boot: init apps first, then background apps staggered over the first minutes.
  for (AppId i = 0; i < w.apps.size(); ++i)
    if (w.apps[i].is_init) ev.push_back({0, EventKind::BOOT_LAUNCH, i, 0});
  for (std::size_t j = 0; j < bg.size(); ++j)
    ev.push_back({static_cast<TimeMs>(5000 + j * 2000), EventKind::BOOT_LAUNCH, bg[j], 0});

  std::vector<double> grow_acc_kb(w.apps.size(), 0.0);

  for (int day = 0; day < w.days; ++day) {
    const TimeMs day_start = static_cast<TimeMs>(day) * day_ms;
    const TimeMs burst_start = day_start + burst_start_off;
    const TimeMs burst_end = burst_start + burst_len;

    if (day > 0)
      for (AppId i = 0; i < w.apps.size(); ++i)
        if (!w.apps[i].is_init)
          ev.push_back({day_start + 1000, EventKind::DAY_RELAUNCH, i, 0});

    // Foreground sessions, one app at a time across the burst window.
    for (std::size_t i = 0; i < fg.size(); ++i) {
      const TimeMs t0 = burst_start + static_cast<TimeMs>(i) * session_len;
      ev.push_back({t0, EventKind::SESSION_START, fg[i], 0});
      if (access_step > 0)
        for (TimeMs t = t0 + access_step; t < t0 + session_len; t += access_step)
          ev.push_back({t, EventKind::ACCESS, fg[i], access_rng.next_u64()});
      ev.push_back({t0 + session_len - 1, EventKind::SESSION_END, fg[i], 0});
    }

    // Background polling all day long.
    for (std::size_t j = 0; j < bg.size(); ++j) {
      const TimeMs stagger = static_cast<TimeMs>(j) * 997;
      for (TimeMs t = day_start + w.idle_touch_interval_ms + stagger; t < day_start + day_ms;
           t += w.idle_touch_interval_ms)
        for (int k = 0; k < w.idle_touch_pages; ++k)
          ev.push_back({t, EventKind::ACCESS, bg[j], idle_rng.next_u64()});
    }

    // Idle-period growth: outside the burst window only.
    for (AppId i = 0; i < w.apps.size(); ++i) {
      double kb_min = w.apps[i].background_growth_kb_per_min;
      if (kb_min <= 0.0) continue;
      for (TimeMs t = day_start + w.grow_tick_ms; t < day_start + day_ms;
           t += w.grow_tick_ms) {
        if (t >= burst_start && t < burst_end) continue;
        grow_acc_kb[i] += kb_min;
        std::int64_t pages = static_cast<std::int64_t>(grow_acc_kb[i] / 4.0);
        if (pages >= 1) {
          grow_acc_kb[i] -= static_cast<double>(pages) * 4.0;
          ev.push_back({t, EventKind::GROW, i, static_cast<std::uint64_t>(pages)});
        }
      }
    }
  }

  std::stable_sort(ev.begin(), ev.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.t < b.t; });
  return R::success(std::move(trace));
}

// -- trace serialization ------------------------------------------------------

inline const char* event_token(EventKind k) {
  switch (k) {
    case EventKind::BOOT_LAUNCH: return "BOOT";
    case EventKind::DAY_RELAUNCH: return "DAYRL";
    case EventKind::SESSION_START: return "SSTART";
    case EventKind::SESSION_END: return "SEND";
    case EventKind::ACCESS: return "ACC";
    case EventKind::GROW: return "GROW";
  }
  return "?";
}

inline bool parse_event_token(const std::string& s, EventKind& out) {
  if (s == "BOOT") { out = EventKind::BOOT_LAUNCH; return true; }
  if (s == "DAYRL") { out = EventKind::DAY_RELAUNCH; return true; }
  if (s == "SSTART") { out = EventKind::SESSION_START; return true; }
  if (s == "SEND") { out = EventKind::SESSION_END; return true; }
  if (s == "ACC") { out = EventKind::ACCESS; return true; }
  if (s == "GROW") { out = EventKind::GROW; return true; }
  return false;
}

/// Line-delimited trace form, used for regression pinning and hashing.
inline std::string serialize_trace(const Trace& t) {
  std::string out;
  out.reserve(t.events.size() * 32 + 64);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "swamtrace v1 seed=%llu n=%llu\n",
                static_cast<unsigned long long>(t.seed),
                static_cast<unsigned long long>(t.events.size()));
  out += buf;
  for (const TraceEvent& e : t.events) {
    std::snprintf(buf, sizeof(buf), "%lld %s %u %llu\n",
                  static_cast<long long>(e.t), event_token(e.kind), e.app,
                  static_cast<unsigned long long>(e.arg));
    out += buf;
  }
  return out;
}

inline Result<Trace> parse_trace(const std::string& text) {
  using R = Result<Trace>;
  Trace t;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (header) {
      unsigned long long seed = 0, n = 0;
      if (std::sscanf(line.c_str(), "swamtrace v1 seed=%llu n=%llu", &seed, &n) != 2)
        return R::failure(Err::ConfigInvalid, "trace header");
      t.seed = seed;
      t.events.reserve(n);
      header = false;
      continue;
    }
    long long tm = 0;
    char tok[16];
    unsigned app = 0;
    unsigned long long arg = 0;
    if (std::sscanf(line.c_str(), "%lld %15s %u %llu", &tm, tok, &app, &arg) != 4)
      return R::failure(Err::ConfigInvalid, "trace line: " + line);
    EventKind k;
    if (!parse_event_token(tok, k))
      return R::failure(Err::ConfigInvalid, "trace event kind: " + line);
    t.events.push_back({tm, k, app, arg});
  }
  if (header) return R::failure(Err::ConfigInvalid, "empty trace");
  return R::success(std::move(t));
}

inline std::uint64_t trace_hash(const Trace& t) {
  std::string s = serialize_trace(t);
  return fnv1a(s.data(), s.size());
}

// -- reference scenarios ------------------------------------------------------

enum class DeviceProfile { LOW_END, HIGH_END };

namespace detail {

inline AppSpec fg_spec(const char* name, std::int64_t ws_mb, std::int64_t n_symbols,
                       double tl_ms, double xml_ms) {
  AppSpec s;
  s.name = name;
  s.role = Role::FOREGROUND;
  s.idle_band = OomBand::CACHED;
  s.time_critical = true;
  s.working_set_mb = ws_mb;
  s.n_symbols = n_symbols;
  s.tl_ms = tl_ms;
  s.xml_total_ms = xml_ms;
  return s;
}

inline AppSpec bg_spec(const char* name, std::int64_t ws_mb, std::int64_t n_symbols,
                       double tl_ms, double xml_ms, OomBand band) {
  AppSpec s;
  s.name = name;
  s.role = Role::BACKGROUND;
  s.idle_band = band;
  s.working_set_mb = ws_mb;
  s.n_symbols = n_symbols;
  s.tl_ms = tl_ms;
  s.xml_total_ms = xml_ms;
  return s;
}

}  // namespace detail

/// The built-in comparison workload: 15 foreground + 25 background apps
/// plus the init process, daily 1.5 h interaction bursts, idle-period
/// background growth, 28 days.
inline ScenarioConfig default_scenario(DeviceProfile profile, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.seed = seed;
  cfg.policy = Policy::SWAM;

  const bool low = profile == DeviceProfile::LOW_END;
  cfg.device.ram_bytes = low ? mib(4096) : mib(8192);
  cfg.device.zram_bytes = low ? mib(512) : mib(1024);
  cfg.device.storage_bytes = low ? mib(65536) : mib(131072);
  cfg.device.nand_partition_bytes = low ? mib(2048) : mib(3072);
  cfg.device.storage_used_other_bytes = low ? mib(8192) : mib(12288);

  // Swam files shared across days stay warm; only genuinely idle files
  // are reclaimed by the ISOP eraser in this workload.
  cfg.cleaner.isop_cold_threshold_ms = 2 * day_ms;

  WorkloadConfig& w = cfg.workload;
  w.days = 28;
  const std::int64_t f = low ? 1 : 2;  // high-end roster doubles working sets

  AppSpec sys;
  sys.name = "system_server";
  sys.role = Role::BACKGROUND;
  sys.idle_band = OomBand::NATIVE;
  sys.is_init = true;
  sys.working_set_mb = low ? 256 : 384;
  sys.so_fraction = 0.20;
  sys.n_symbols = 800;
  sys.tl_ms = 20.0;
  sys.xml_total_ms = 0.0;
  w.apps.push_back(sys);

  using detail::bg_spec;
  using detail::fg_spec;
  // Foreground roster (working set MiB, symbols, SO load ms, XML ms).
  w.apps.push_back(fg_spec("Youtube", 120 * f, 7000, 50, 260));
  w.apps.push_back(fg_spec("Netflix", 115 * f, 6500, 50, 250));
  w.apps.push_back(fg_spec("Podcast", 65 * f, 3000, 30, 180));
  w.apps.push_back(fg_spec("Facebook", 105 * f, 5000, 40, 320));
  w.apps.push_back(fg_spec("Twitter", 70 * f, 1200, 25, 200));
  w.apps.push_back(fg_spec("TikTok", 115 * f, 4500, 40, 450));
  w.apps.push_back(fg_spec("Skype", 80 * f, 3500, 35, 260));
  w.apps.push_back(fg_spec("WhatsApp", 70 * f, 2500, 30, 420));
  w.apps.push_back(fg_spec("Viber", 65 * f, 2800, 30, 240));
  w.apps.push_back(fg_spec("BBCNews", 60 * f, 2200, 25, 210));
  w.apps.push_back(fg_spec("NewYorkTimes", 65 * f, 2400, 25, 215));
  w.apps.push_back(fg_spec("CookieRun", 185 * f, 16000, 80, 300));
  w.apps.push_back(fg_spec("AngryBird", 160 * f, 13000, 70, 290));
  w.apps.push_back(fg_spec("Chrome", 115 * f, 7500, 55, 230));
  w.apps.push_back(fg_spec("Firefox", 105 * f, 7000, 55, 225));

  const OomBand SVC = OomBand::SERVICE;
  const OomBand CAC = OomBand::CACHED;
  w.apps.push_back(bg_spec("Pinterest", 55 * f, 2600, 30, 220, CAC));
  w.apps.push_back(bg_spec("Jellyfin", 45 * f, 2200, 25, 180, SVC));
  w.apps.push_back(bg_spec("Kodi", 50 * f, 2400, 25, 190, SVC));
  w.apps.push_back(bg_spec("Spotify", 60 * f, 2800, 30, 210, SVC));
  w.apps.push_back(bg_spec("Instagram", 65 * f, 3200, 35, 260, CAC));
  w.apps.push_back(bg_spec("Telegram", 55 * f, 2400, 25, 230, CAC));
  w.apps.push_back(bg_spec("Discord", 55 * f, 2600, 30, 240, CAC));
  w.apps.push_back(bg_spec("Snapchat", 60 * f, 3000, 30, 250, CAC));
  w.apps.push_back(bg_spec("Evernote", 45 * f, 1800, 20, 190, CAC));
  w.apps.push_back(bg_spec("Notion", 50 * f, 2000, 25, 200, CAC));
  w.apps.push_back(bg_spec("OneNote", 45 * f, 1800, 20, 190, CAC));
  w.apps.push_back(bg_spec("Colornote", 30 * f, 1000, 15, 150, CAC));
  w.apps.push_back(bg_spec("Airbnb", 50 * f, 2200, 25, 220, CAC));
  w.apps.push_back(bg_spec("Rentalcars", 40 * f, 1600, 20, 190, CAC));
  w.apps.push_back(bg_spec("Skyscanner", 45 * f, 1800, 20, 200, CAC));
  w.apps.push_back(bg_spec("Dropbox", 50 * f, 1900, 25, 170, SVC));
  w.apps.push_back(bg_spec("TeraBox", 40 * f, 1500, 20, 160, SVC));
  w.apps.push_back(bg_spec("OneDrive", 50 * f, 1900, 25, 170, SVC));
  w.apps.push_back(bg_spec("GoogleDrive", 55 * f, 2100, 25, 180, SVC));
  w.apps.push_back(bg_spec("CandyCrushSaga", 70 * f, 5200, 45, 260, CAC));
  w.apps.push_back(bg_spec("ClashOfClans", 75 * f, 5600, 45, 270, CAC));
  w.apps.push_back(bg_spec("SubwaySurfers", 65 * f, 4800, 40, 250, CAC));
  w.apps.push_back(bg_spec("GoogleNews", 45 * f, 1700, 20, 200, CAC));
  w.apps.push_back(bg_spec("Reddit", 55 * f, 2300, 25, 230, CAC));
  w.apps.push_back(bg_spec("Flipboard", 45 * f, 1800, 20, 210, CAC));

  // About 8% of the roster shares platform SO pages.
  for (auto& s : w.apps)
    if (s.name == "Instagram" || s.name == "Telegram" || s.name == "Discord")
      s.so_sharing_group = 1;

  Rng growth_rng = Rng(seed).fork(3);
  for (auto& s : w.apps) {
    if (s.is_init) continue;
    s.background_growth_kb_per_min = s.role == Role::BACKGROUND
                                         ? growth_rng.uniform(10.0, 20.0)
                                         : growth_rng.uniform(2.0, 6.0);
  }
  return cfg;
}

}  // namespace swamsim
