#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swamsim/model.hpp"
#include "swamsim/types.hpp"

namespace swamsim {

/// Reclamation-stage trigger levels as utilization fractions. Each stage
/// frees down to (threshold - hysteresis) once triggered.
struct Thresholds {
  double swap_threshold = 0.60;
  double lmkd_threshold = 0.80;
  double oomk_threshold = 0.90;
  double hysteresis = 0.05;
  OomBand lmkd_min_band = OomBand::FOREGROUND;  // LMKD never kills below this band
};

struct KillEvent {
  TimeMs time = 0;
  KillerKind killer = KillerKind::LMKD;
  AppId app = no_app;
  std::int64_t bytes_reclaimed = 0;       // owned-page bytes at kill time
  double relaunch_cost_at_kill = 0.0;
  std::vector<FileId> unlinked_files;
};

/// LMKD victim: the most killable band, largest owner first.
inline std::optional<AppId> lmkd_select(const Model& m, const Thresholds& th) {
  std::optional<AppId> best;
  for (AppId a = 0; a < m.app_count(); ++a) {
    const App& app = m.app(a);
    if (app.state != AppState::RUNNING) continue;
    if (app.band < th.lmkd_min_band) continue;
    if (!best) {
      best = a;
      continue;
    }
    const App& cur = m.app(*best);
    if (app.band != cur.band) {
      if (app.band > cur.band) best = a;
    } else if (app.owned_bytes() != cur.owned_bytes()) {
      if (app.owned_bytes() > cur.owned_bytes()) best = a;
    }  // equal band and bytes: keep the smaller app id
  }
  return best;
}

inline bool oomk_excluded(const App& app) {
  return app.batch || app.root || app.hardware || app.is_init;
}

/// Kernel OOMK heuristic: large-footprint candidates, minus protected
/// process classes, lowest-priority band killed first.
inline Result<AppId> oomk_select(const Model& m) {
  using R = Result<AppId>;
  std::optional<AppId> best;
  for (AppId a = 0; a < m.app_count(); ++a) {
    const App& app = m.app(a);
    if (app.state != AppState::RUNNING || oomk_excluded(app)) continue;
    if (!best) {
      best = a;
      continue;
    }
    const App& cur = m.app(*best);
    if (app.band != cur.band) {
      if (app.band > cur.band) best = a;
    } else if (app.owned_bytes() != cur.owned_bytes()) {
      if (app.owned_bytes() > cur.owned_bytes()) best = a;
    }
  }
  if (!best) return R::failure(Err::SystemPanic, "no killable candidate");
  return R::success(*best);
}

/// EOOM victim: among OOMK-eligible apps, the minimum relaunch cost.
/// `costs` is indexed by AppId.
inline Result<AppId> eoom_select(const Model& m, const std::vector<double>& costs) {
  using R = Result<AppId>;
  std::optional<AppId> best;
  for (AppId a = 0; a < m.app_count(); ++a) {
    const App& app = m.app(a);
    if (app.state != AppState::RUNNING || oomk_excluded(app)) continue;
    if (!best) {
      best = a;
      continue;
    }
    const App& cur = m.app(*best);
    double ca = costs[a];
    double cb = costs[*best];
    if (ca != cb) {
      if (ca < cb) best = a;
    } else if (app.owned_bytes() != cur.owned_bytes()) {
      if (app.owned_bytes() > cur.owned_bytes()) best = a;
    }
  }
  if (!best) return R::failure(Err::SystemPanic, "no killable candidate");
  return R::success(*best);
}

/// Terminate an app and reclaim everything it owns. Shared SO pages only
/// drop this owner's reference.
inline Result<KillEvent> kill(Model& m, AppId a, KillerKind killer, TimeMs now) {
  using R = Result<KillEvent>;
  if (a >= m.app_count()) return R::failure(Err::Precondition, "unknown app");
  if (m.app(a).state == AppState::KILLED) return R::failure(Err::AlreadyKilled);
  KillEvent ev;
  ev.time = now;
  ev.killer = killer;
  ev.app = a;
  ev.relaunch_cost_at_kill = m.app(a).relaunch_cost_ms;
  ReleaseSummary rel = m.release_app(a);
  ev.bytes_reclaimed = rel.owned_pages * page_bytes;
  ev.unlinked_files = std::move(rel.unlinked_files);
  return R::success(std::move(ev));
}

}  // namespace swamsim
