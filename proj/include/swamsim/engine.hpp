#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "swamsim/cleaner.hpp"
#include "swamsim/cost.hpp"
#include "swamsim/killers.hpp"
#include "swamsim/model.hpp"
#include "swamsim/swap.hpp"
#include "swamsim/types.hpp"
#include "swamsim/workload.hpp"

namespace swamsim {

/// Which reclamation stages a policy dispatches, in pipeline order.
struct PolicyChain {
  Policy policy = Policy::SWAM;
  bool adaptive_swap = false;  // SWAM victim selection + dual paths
  bool has_cleaner = false;    // SO + ISOP erasers
  bool has_lmkd = false;
  bool has_oomk = false;
  bool has_eoom = false;

  static PolicyChain make(Policy p) {
    PolicyChain c;
    c.policy = p;
    if (p == Policy::SWAM) {
      c.adaptive_swap = true;
      c.has_cleaner = true;
      c.has_eoom = true;  // replaces both LMKD and OOMK
    } else {
      c.has_lmkd = true;
      c.has_oomk = true;
    }
    return c;
  }
};

struct LaunchRecord {
  TimeMs time = 0;
  AppId app = no_app;
  bool cold = false;
  double cost_ms = 0.0;
};

/// Hourly snapshot of memory and swap occupancy.
struct SampleRow {
  TimeMs time = 0;
  double free_mb = 0.0;
  double zram_mb = 0.0;
  double swam_mb = 0.0;
};

/// One per-day output row of a run.
struct DayRow {
  Policy policy = Policy::SWAM;
  int day = 1;  // 1-based
  std::int64_t kills_cumulative = 0;
  double mean_free_mb = 0.0;
  double mean_launch_ms = 0.0;
  double mean_response_ms = 0.0;
  double zram_used_mb = 0.0;
  double swam_used_mb = 0.0;
};

struct MetricsLog {
  Policy policy = Policy::SWAM;
  std::uint64_t trace_hash = 0;

  std::vector<KillEvent> kills;
  std::vector<CleanRec> cleans;
  std::vector<LaunchRecord> launches;
  std::vector<DayRow> days;
  std::vector<SampleRow> samples;    // hourly free/zram/swam series
  std::vector<SwapRec> swap_sample;  // capped debug retention
  std::vector<std::uint32_t> per_app_kills;

  bool panicked = false;
  TimeMs panic_time = -1;
  TimeMs first_kill_time = -1;

  std::int64_t accesses = 0;
  std::int64_t faults = 0;
  std::int64_t penalized_faults = 0;
  double response_sum_ms = 0.0;
  double response_swapin_ms = 0.0;    // swap-in + reload share
  double response_penalty_ms = 0.0;   // pressure-regime direct reclaim
  double response_room_ms = 0.0;      // direct reclaim to make resident room
  double response_coldstart_ms = 0.0; // user-initiated cold starts
  std::int64_t launches_total = 0;
  std::int64_t cold_launches = 0;
  double launch_sum_ms = 0.0;

  std::int64_t swap_out_pages = 0;
  std::int64_t swap_in_pages = 0;
  std::int64_t fast_out_pages = 0;
  std::int64_t slow_out_pages = 0;
  std::int64_t slow_out_with_zram_room = 0;   // Fig.-1 gating rule violations
  std::int64_t anon_out_with_resident_so = 0; // SO-priority violations
  std::int64_t unmap_checks_total = 0;
  std::int64_t so_pages_erased = 0;
  std::int64_t isop_files_deleted = 0;
  std::int64_t isop_pages_dropped = 0;
  std::int64_t audit_violations = 0;
  std::int64_t peak_swam_bytes = 0;
  std::int64_t peak_zram_physical = 0;
  double reclaim_stall_ms = 0.0;

  double mean_response_ms() const {
    return accesses > 0 ? response_sum_ms / static_cast<double>(accesses) : 0.0;
  }
  double mean_launch_ms() const {
    return launches_total > 0 ? launch_sum_ms / static_cast<double>(launches_total) : 0.0;
  }
};

struct EngineOptions {
  bool audit_per_event = true;
  std::int64_t full_audit_stride = 0;  // events between full recounts; 0 = end only
  int swap_sample_cap = 0;
};

/// Discrete-event loop: applies trace events, samples metrics, and runs
/// the configured policy's escalation chain whenever a utilization
/// threshold is crossed.
class Engine {
 public:
  Engine(const ScenarioConfig& cfg, Policy policy, EngineOptions opts = {})
      : cfg_(cfg),
        chain_(PolicyChain::make(policy)),
        opts_(opts),
        model_(device_for(cfg.device, policy)) {
    plans_ = make_launch_plans(cfg_.workload);
    Rng profile_rng = Rng(cfg_.seed).fork(1000);
    for (std::size_t i = 0; i < cfg_.workload.apps.size(); ++i) {
      AppId a = model_.add_app(
          make_app(cfg_.workload.apps[i], cfg_.estimators, profile_rng.fork(i)));
      model_.app(a).state = AppState::KILLED;  // not launched yet
    }
    metrics_.policy = policy;
    metrics_.per_app_kills.assign(model_.app_count(), 0);
    group_pages_.assign(64, {});
    next_isop_ = chain_.has_cleaner ? cfg_.cleaner.isop_interval_ms : -1;
    isop_interval_ = cfg_.cleaner.isop_interval_ms;
  }

  Model& model() { return model_; }
  const MetricsLog& metrics() const { return metrics_; }
  TimeMs clock() const { return clock_; }

  /// Runtime knob mirroring the /proc unmap-granularity interface.
  void set_unmap_unit(std::int64_t bytes) { cfg_.swap.unmap_unit_bytes = bytes; }

  /// Apply one trace event (scheduled cleaner ticks run first).
  void step(const TraceEvent& e) {
    if (metrics_.panicked) return;
    run_isop_until(e.t);
    sample_until(e.t);
    clock_ = std::max(clock_, e.t);
    apply(e);
    events_seen_++;
    if (opts_.audit_per_event) metrics_.audit_violations += model_.audit_fast();
    if (opts_.full_audit_stride > 0 && events_seen_ % opts_.full_audit_stride == 0)
      metrics_.audit_violations += model_.audit_full();
    metrics_.peak_swam_bytes =
        std::max(metrics_.peak_swam_bytes, model_.mem().swam_bytes_total);
    metrics_.peak_zram_physical =
        std::max(metrics_.peak_zram_physical, model_.mem().zram_stored_physical);
  }

  MetricsLog run(const Trace& trace) {
    metrics_.trace_hash = trace_hash(trace);
    for (const TraceEvent& e : trace.events) {
      if (metrics_.panicked) break;
      step(e);
    }
    metrics_.audit_violations += model_.audit_full();
    flush_days((clock_ / day_ms + 1) * day_ms);
    return metrics_;
  }

 private:
  static DeviceConfig device_for(DeviceConfig dev, Policy p) {
    if (p == Policy::NAND_SWAP) dev.zram_bytes = 0;
    if (p == Policy::ZRAM || p == Policy::SWAM) dev.nand_partition_bytes = 0;
    return dev;
  }

  std::int64_t target_numerator(double frac) const {
    return static_cast<std::int64_t>(frac * static_cast<double>(model_.mem().ram_capacity));
  }

  // -- event application ------------------------------------------------------

  void apply(const TraceEvent& e) {
    switch (e.kind) {
      case EventKind::BOOT_LAUNCH:
      case EventKind::DAY_RELAUNCH:
        if (model_.app(e.app).state != AppState::RUNNING) cold_launch(e.app, e.t);
        break;
      case EventKind::SESSION_START: {
        App& a = model_.app(e.app);
        if (a.state != AppState::RUNNING) {
          // The user waits out the cold start: it is both the launch
          // latency and the response time of this first interaction.
          double cost = cold_launch(e.app, e.t);
          metrics_.accesses++;
          metrics_.response_sum_ms += cost;
          metrics_.response_coldstart_ms += cost;
          day_accesses_++;
          day_response_sum_ += cost;
        } else {
          record_launch(e.app, e.t, false, cfg_.estimators.warm_start_ms);
        }
        model_.app(e.app).band = OomBand::FOREGROUND;
        break;
      }
      case EventKind::SESSION_END:
        model_.app(e.app).band = model_.app(e.app).idle_band;
        break;
      case EventKind::ACCESS:
        do_access(e.app, e.t, e.arg);
        break;
      case EventKind::GROW:
        do_grow(e.app, e.t, static_cast<std::int64_t>(e.arg));
        break;
    }
  }

  void do_grow(AppId a, TimeMs now, std::int64_t n_pages) {
    if (model_.app(a).state != AppState::RUNNING || n_pages <= 0) return;
    metrics_.reclaim_stall_ms += ensure_room(n_pages * page_bytes, now);
    auto r = model_.allocate(a, n_pages, PageKind::ANON, now);
    if (!r.ok()) {
      // Even full escalation could not make room.
      if (!metrics_.panicked) panic(now);
      return;
    }
    metrics_.reclaim_stall_ms += settle(now);
  }

  void do_access(AppId a, TimeMs now, std::uint64_t draw) {
    App& app = model_.app(a);
    if (app.state != AppState::RUNNING) return;  // dead until next-day relaunch
    AccessDraw d = decode_access(draw, cfg_.workload);
    const auto* list = d.so ? &app.so_slots : &app.other_slots;
    if (list->empty()) list = d.so ? &app.other_slots : &app.so_slots;
    if (list->empty()) return;
    std::size_t n = list->size();
    std::size_t subset =
        d.hot ? std::max<std::size_t>(1, static_cast<std::size_t>(
                    static_cast<double>(n) * cfg_.workload.hot_fraction))
              : n;
    std::uint32_t slot = (*list)[d.index % subset];

    double latency = 0.0;
    model_.touch(slot, now);
    Location from = model_.page_at(slot).location;
    if (from != Location::RESIDENT) {
      // Pressure regime: the fault pays a direct-reclaim delay on top of
      // the swap-in itself.
      bool pressured =
          model_.utilization() >= cfg_.thresholds.lmkd_threshold || swap_exhausted();
      double room = ensure_room(page_bytes, now);
      latency += room;
      metrics_.response_room_ms += room;
      auto r = model_.move_to_resident(slot, now);
      if (!r.ok()) {
        if (!metrics_.panicked) panic(now);
        return;
      }
      double in_cost = swap_in_latency(model_, from, model_.page_at(slot).kind, a, cfg_.swap);
      latency += in_cost;
      metrics_.response_swapin_ms += in_cost;
      if (pressured) {
        latency += cfg_.swap.pressure_fault_penalty_ms;
        metrics_.response_penalty_ms += cfg_.swap.pressure_fault_penalty_ms;
        metrics_.penalized_faults++;
      }
      metrics_.faults++;
      metrics_.swap_in_pages++;
      if (opts_.swap_sample_cap > 0 &&
          metrics_.swap_sample.size() < static_cast<std::size_t>(opts_.swap_sample_cap))
        metrics_.swap_sample.push_back(
            {now, model_.page_at(slot).id, from, model_.page_at(slot).kind, true, false, 0});
      // Background reclamation triggered by the swap-in is not charged
      // to this access.
      metrics_.reclaim_stall_ms += settle(now);
    }
    metrics_.accesses++;
    metrics_.response_sum_ms += latency;
    day_response_sum_ += latency;
    day_accesses_++;
  }

  /// First launch or cold restart: repopulate the app's pages and pay
  /// the estimated initialization cost plus any reclamation stall.
  /// Returns the recorded launch cost.
  double cold_launch(AppId a, TimeMs now) {
    App& app = model_.app(a);
    const LaunchPlan& plan = plans_[a];
    double stall = 0.0;

    if (app.kills > 0)
      model_.mark_relaunched(a);
    else
      app.state = AppState::RUNNING;

    std::int64_t exclusive_so = plan.so_pages;
    if (plan.group > 0 && plan.group_shared_pages > 0) {
      auto& reg = group_pages_[static_cast<std::size_t>(plan.group)];
      // Drop ids whose pages died with their last owner.
      std::vector<PageId> live;
      live.reserve(reg.size());
      for (PageId id : reg)
        if (model_.slot_of(id) != Model::bad_slot) live.push_back(id);
      reg = std::move(live);
      std::int64_t shared_now = 0;
      for (PageId id : reg) {
        if (shared_now >= plan.group_shared_pages) break;
        if (!model_.share_so_page(id, a).ok()) continue;
        shared_now++;
        // Population faults: swapped platform pages are paged back in as
        // part of the launch.
        std::uint32_t slot = model_.slot_of(id);
        Location loc = model_.page_at(slot).location;
        if (loc != Location::RESIDENT) {
          stall += ensure_room(page_bytes, now);
          if (model_.move_to_resident(slot, now).ok()) {
            stall += swap_in_latency(model_, loc, PageKind::SO, a, cfg_.swap);
            metrics_.swap_in_pages++;
          }
        }
      }
      std::int64_t missing = plan.group_shared_pages - shared_now;
      if (missing > 0) {
        stall += ensure_room(missing * page_bytes, now);
        auto r = model_.allocate(a, missing, PageKind::SO, now);
        if (r.ok())
          for (PageId id : r.value) reg.push_back(id);
      }
      exclusive_so = plan.so_pages - plan.group_shared_pages;
    }

    auto alloc = [&](std::int64_t n, PageKind kind) {
      if (n <= 0 || metrics_.panicked) return;
      stall += ensure_room(n * page_bytes, now);
      auto r = model_.allocate(a, n, kind, now);
      if (!r.ok() && !metrics_.panicked) panic(now);
    };
    alloc(exclusive_so, PageKind::SO);
    alloc(plan.anon_pages, PageKind::ANON);
    alloc(plan.file_pages, PageKind::FILE);
    metrics_.reclaim_stall_ms += settle(now);  // background, not launch latency

    double cost = app.relaunch_cost_ms + stall;
    record_launch(a, now, true, cost);
    return cost;
  }

  void record_launch(AppId a, TimeMs now, bool cold, double cost_ms) {
    metrics_.launches.push_back({now, a, cold, cost_ms});
    metrics_.launches_total++;
    if (cold) metrics_.cold_launches++;
    metrics_.launch_sum_ms += cost_ms;
    day_launch_sum_ += cost_ms;
    day_launches_++;
  }

  // -- reclamation ------------------------------------------------------------

  bool swap_exhausted() const {
    const MemoryState& ms = model_.mem();
    bool zram_full = !model_.zram_has_room();
    switch (chain_.policy) {
      case Policy::ZRAM:
        return zram_full;
      case Policy::NAND_SWAP:
        return ms.nand_used + page_bytes > ms.nand_partition_bytes;
      case Policy::ZRAM_NAND:
        return zram_full && ms.nand_used + page_bytes > ms.nand_partition_bytes;
      case Policy::SWAM:
        return zram_full && ms.storage_free() < page_bytes;
    }
    return false;
  }

  /// Make room for an allocation of `bytes`, escalating through the
  /// whole chain if necessary. Returns the modeled stall time.
  double ensure_room(std::int64_t bytes, TimeMs now) {
    std::int64_t deficit = model_.numerator() + bytes - model_.mem().ram_capacity;
    if (deficit <= 0) return 0.0;
    double stall = run_swap_stage(now, deficit + mib(4));
    deficit = model_.numerator() + bytes - model_.mem().ram_capacity;
    if (deficit > 0) stall += run_killers(now, /*force=*/true, bytes);
    return stall;
  }

  /// Threshold-driven escalation: swap stage, then killers, looping while
  /// kills opened new swap room. Each stage frees down to its trigger
  /// minus the hysteresis before the next one may run.
  double settle(TimeMs now) {
    const Thresholds& th = cfg_.thresholds;
    double stall = 0.0;
    for (int round = 0; round < 16 && !metrics_.panicked; ++round) {
      std::int64_t before = model_.numerator();
      if (model_.utilization() >= th.swap_threshold) {
        std::int64_t need =
            model_.numerator() - target_numerator(th.swap_threshold - th.hysteresis);
        stall += run_swap_stage(now, need);
      }
      stall += run_killers(now, /*force=*/false, 0);
      if (model_.utilization() < th.swap_threshold) break;
      if (model_.numerator() >= before) break;  // no progress this round
    }
    return stall;
  }

  double run_killers(TimeMs now, bool force, std::int64_t want_bytes) {
    const Thresholds& th = cfg_.thresholds;
    double stall = 0.0;
    auto should_run = [&](double trigger) {
      if (force)
        return model_.numerator() + want_bytes > model_.mem().ram_capacity;
      return model_.utilization() >= trigger;
    };
    auto target_ok = [&](double trigger) {
      if (force)
        return model_.numerator() + want_bytes <= model_.mem().ram_capacity;
      return model_.utilization() < trigger - th.hysteresis;
    };

    if (chain_.has_lmkd && should_run(th.lmkd_threshold)) {
      while (!target_ok(th.lmkd_threshold)) {
        auto victim = lmkd_select(model_, th);
        if (!victim) break;  // nothing LMKD may kill; OOMK decides next
        stall += do_kill(*victim, KillerKind::LMKD, now);
      }
    }
    if (chain_.has_eoom && should_run(th.oomk_threshold)) {
      while (!target_ok(th.oomk_threshold)) {
        std::vector<double> costs(model_.app_count(), 0.0);
        for (AppId a = 0; a < model_.app_count(); ++a)
          costs[a] = model_.app(a).relaunch_cost_ms;
        auto victim = eoom_select(model_, costs);
        if (!victim.ok()) {
          panic(now);
          break;
        }
        stall += do_kill(victim.value, KillerKind::EOOM, now);
      }
    } else if (chain_.has_oomk && should_run(th.oomk_threshold)) {
      while (!target_ok(th.oomk_threshold)) {
        auto victim = oomk_select(model_);
        if (!victim.ok()) {
          panic(now);
          break;
        }
        stall += do_kill(victim.value, KillerKind::OOMK, now);
      }
    }
    return stall;
  }

  double do_kill(AppId victim, KillerKind kind, TimeMs now) {
    auto ev = kill(model_, victim, kind, now);
    if (!ev.ok()) return 0.0;
    metrics_.per_app_kills[victim]++;
    if (metrics_.first_kill_time < 0) metrics_.first_kill_time = now;
    double stall = 0.0;
    if (ev.value.bytes_reclaimed > 0) {
      auto um = unmap_cost(ev.value.bytes_reclaimed, active_unmap_unit(), std::nullopt,
                           cfg_.swap);
      if (um.ok()) {
        stall = um.value.completion_ms;
        metrics_.unmap_checks_total += um.value.checks;
      }
    }
    metrics_.kills.push_back(std::move(ev.value));
    return stall;
  }

  std::int64_t active_unmap_unit() const {
    return chain_.adaptive_swap ? cfg_.swap.unmap_unit_bytes
                                : cfg_.swap.fixed_unmap_unit_bytes;
  }

  /// Swap capacity still open to this policy; a stalled stage is not
  /// re-scanned until this (or the resident pool) moved by a quantum.
  std::int64_t swap_headroom() const {
    const MemoryState& ms = model_.mem();
    std::int64_t zram_room = ms.zram_capacity - ms.zram_stored_physical;
    switch (chain_.policy) {
      case Policy::ZRAM: return zram_room;
      case Policy::NAND_SWAP: return ms.nand_partition_bytes - ms.nand_used;
      case Policy::ZRAM_NAND:
        return zram_room + (ms.nand_partition_bytes - ms.nand_used);
      case Policy::SWAM: return zram_room + ms.storage_free();
    }
    return 0;
  }

  static constexpr std::int64_t stage_retry_quantum = mib(16);

  /// One swap stage invocation: step the victim scan, model the unmap
  /// batching, and let the cleaners unblock a stalled path.
  double run_swap_stage(TimeMs now, std::int64_t need) {
    if (need <= 0) return 0.0;
    if (swap_blocked_ && swap_headroom() < blocked_headroom_ + stage_retry_quantum &&
        model_.numerator() < blocked_numerator_ + stage_retry_quantum)
      return 0.0;
    double stall = 0.0;
    std::int64_t start = model_.numerator();
    for (int round = 0; round < 16; ++round) {
      std::int64_t need_left = need - (start - model_.numerator());
      if (need_left <= 0) break;
      scratch_.clear();
      StepResult r =
          chain_.adaptive_swap
              ? adaptive_swap_step(model_, now, need_left, cfg_.swap, &scratch_)
              : baseline_swap_step(model_, now, need_left, cfg_.swap, chain_.policy,
                                   &scratch_);
      stall += r.latency_ms;
      fold_swap_records();
      if (r.pages_out > 0) {
        auto um = unmap_cost(r.pages_out * page_bytes, active_unmap_unit(),
                             std::nullopt, cfg_.swap);
        if (um.ok()) {
          stall += um.value.completion_ms;
          metrics_.unmap_checks_total += um.value.checks;
        }
      }
      if (r.stall == Err::None) {
        if (r.pages_out == 0) break;  // victims exhausted
        continue;                     // truncated scan; rescan for the rest
      }
      if (!chain_.has_cleaner) break;  // baselines escalate to killers

      if (r.stall == Err::ZramFull) {
        auto erased = so_erase(model_, need_left, now, &metrics_.cleans);
        if (!erased.ok() || erased.value.empty()) break;
        metrics_.so_pages_erased += static_cast<std::int64_t>(erased.value.size());
      } else if (r.stall == Err::StorageFull) {
        auto em = isop_emergency(model_, now, need_left, cfg_.cleaner, &metrics_.cleans);
        if (em.unlinked.empty()) break;
        metrics_.isop_files_deleted += static_cast<std::int64_t>(em.unlinked.size());
        metrics_.isop_pages_dropped += em.pages_dropped;
        apply_isop_interval(em);
      } else {
        break;
      }
    }
    if (model_.numerator() > start - need) {
      swap_blocked_ = true;
      blocked_headroom_ = swap_headroom();
      blocked_numerator_ = model_.numerator();
    } else {
      swap_blocked_ = false;
    }
    return stall;
  }

  void fold_swap_records() {
    for (const SwapRec& rec : scratch_) {
      if (rec.is_in) continue;
      metrics_.swap_out_pages++;
      if (rec.place == Location::ZRAM)
        metrics_.fast_out_pages++;
      else
        metrics_.slow_out_pages++;
      if (rec.place != Location::ZRAM && rec.zram_had_room)
        metrics_.slow_out_with_zram_room++;
      if (rec.kind == PageKind::ANON && rec.so_eligible_remaining > 0)
        metrics_.anon_out_with_resident_so++;
    }
    if (opts_.swap_sample_cap > 0) {
      for (const SwapRec& rec : scratch_) {
        if (metrics_.swap_sample.size() >= static_cast<std::size_t>(opts_.swap_sample_cap))
          break;
        metrics_.swap_sample.push_back(rec);
      }
    }
  }

  void panic(TimeMs now) {
    metrics_.panicked = true;
    metrics_.panic_time = now;
  }

  // -- cleaner scheduling -----------------------------------------------------

  void run_isop_until(TimeMs t) {
    while (next_isop_ >= 0 && next_isop_ <= t && !metrics_.panicked) {
      sample_until(next_isop_);
      clock_ = std::max(clock_, next_isop_);
      IsopResult r = isop_tick(model_, next_isop_, cfg_.cleaner, &metrics_.cleans);
      metrics_.isop_files_deleted += static_cast<std::int64_t>(r.unlinked.size());
      metrics_.isop_pages_dropped += r.pages_dropped;
      apply_isop_interval(r);
      // Next tick lands on a multiple of the (possibly changed) interval.
      next_isop_ = ((next_isop_ + isop_interval_) / isop_interval_) * isop_interval_;
      if (next_isop_ % isop_interval_ != 0 || next_isop_ <= clock_)
        next_isop_ += isop_interval_;
    }
  }

  void apply_isop_interval(const IsopResult& r) {
    if (r.active_interval_ms > 0) isop_interval_ = r.active_interval_ms;
  }

  // -- metrics sampling -------------------------------------------------------

  void sample_until(TimeMs t) {
    while (next_sample_ <= t) {
      flush_days(next_sample_);
      double free_mb =
          static_cast<double>(model_.free_bytes()) / static_cast<double>(mib(1));
      day_free_sum_mb_ += free_mb;
      day_samples_++;
      if (next_sample_ % hour_ms == 0)
        metrics_.samples.push_back(
            {next_sample_, free_mb,
             static_cast<double>(model_.mem().zram_stored_physical) /
                 static_cast<double>(mib(1)),
             static_cast<double>(model_.mem().swam_bytes_total) /
                 static_cast<double>(mib(1))});
      next_sample_ += minute_ms;
    }
  }

  /// Close out day rows up to (exclusive) time t.
  void flush_days(TimeMs t) {
    int day_of_t = static_cast<int>(t / day_ms);
    while (cur_day_ < day_of_t) {
      DayRow row;
      row.policy = chain_.policy;
      row.day = cur_day_ + 1;
      row.kills_cumulative = static_cast<std::int64_t>(metrics_.kills.size());
      row.mean_free_mb =
          day_samples_ > 0
              ? day_free_sum_mb_ / static_cast<double>(day_samples_)
              : static_cast<double>(model_.free_bytes()) / static_cast<double>(mib(1));
      row.mean_launch_ms =
          day_launches_ > 0 ? day_launch_sum_ / static_cast<double>(day_launches_) : 0.0;
      row.mean_response_ms =
          day_accesses_ > 0 ? day_response_sum_ / static_cast<double>(day_accesses_) : 0.0;
      row.zram_used_mb = static_cast<double>(model_.mem().zram_stored_physical) /
                         static_cast<double>(mib(1));
      row.swam_used_mb = static_cast<double>(model_.mem().swam_bytes_total) /
                         static_cast<double>(mib(1));
      metrics_.days.push_back(row);
      day_free_sum_mb_ = 0.0;
      day_samples_ = 0;
      day_launch_sum_ = 0.0;
      day_launches_ = 0;
      day_response_sum_ = 0.0;
      day_accesses_ = 0;
      cur_day_++;
    }
  }

  ScenarioConfig cfg_;
  PolicyChain chain_;
  EngineOptions opts_;
  Model model_;
  std::vector<LaunchPlan> plans_;
  std::vector<std::vector<PageId>> group_pages_;
  MetricsLog metrics_;
  std::vector<SwapRec> scratch_;

  TimeMs clock_ = 0;
  TimeMs next_isop_ = -1;
  TimeMs isop_interval_ = 0;
  std::int64_t events_seen_ = 0;
  bool swap_blocked_ = false;
  std::int64_t blocked_headroom_ = 0;
  std::int64_t blocked_numerator_ = 0;

  TimeMs next_sample_ = 0;
  int cur_day_ = 0;
  double day_free_sum_mb_ = 0.0;
  std::int64_t day_samples_ = 0;
  double day_launch_sum_ = 0.0;
  std::int64_t day_launches_ = 0;
  double day_response_sum_ = 0.0;
  std::int64_t day_accesses_ = 0;
};

/// Replay a trace under one policy and return the full metrics log.
inline MetricsLog replay(const Trace& trace, const ScenarioConfig& cfg, Policy policy,
                         EngineOptions opts = {}) {
  Engine engine(cfg, policy, opts);
  return engine.run(trace);
}

}  // namespace swamsim
