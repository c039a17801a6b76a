#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "swamsim/model.hpp"
#include "swamsim/types.hpp"

namespace swamsim {

struct SwapPolicyConfig {
  TimeMs recency_window_ms = 60'000;
  int ref_count_threshold = 2;
  std::int64_t unmap_unit_bytes = 4 * 1024 * 1024;    // runtime-adjustable knob
  std::int64_t fixed_unmap_unit_bytes = 32 * 1024;    // conventional fixed unit
  std::int64_t swam_file_capacity_pages = 4096;       // 16 MiB files
  double storage_read_bw = 2'100'000.0;   // bytes/ms, eUFS 3.1 sequential read
  double storage_write_bw = 1'200'000.0;  // bytes/ms
  double zram_in_cost_ms = 0.0005;
  double zram_out_cost_ms = 0.001;
  double per_check_cost_ms = 0.002;
  double per_page_unmap_cost_ms = 0.001;
  double preempt_service_ms = 5.0;
  // Direct-reclaim latency added to a fault taken while utilization sits
  // in the killer band (swap exhausted or nearly so); this is the regime
  // where response time degrades hardest on real devices.
  double pressure_fault_penalty_ms = 0.5;

  double slow_read_ms() const { return static_cast<double>(page_bytes) / storage_read_bw; }
  double slow_write_ms() const { return static_cast<double>(page_bytes) / storage_write_bw; }
};

/// Victim priority of one resident SO page. Lower tier swaps first; the
/// tie-break key only orders tier 4.
struct VictimRank {
  PageId page = 0;
  int tier = 4;
  std::int64_t owner_so_bytes = 0;  // largest owner's total SO bytes
};

inline int so_victim_tier(const Page& p, TimeMs now, const SwapPolicyConfig& cfg) {
  if (now - p.last_access > cfg.recency_window_ms) return 1;
  if (p.ref_count < cfg.ref_count_threshold) return 2;
  if (p.swapped_in_after_out) return 3;
  return 4;
}

namespace detail {

struct SoCandidate {
  std::uint32_t slot = 0;
  PageId id = 0;
  std::int64_t owner_so_bytes = 0;
  std::uint8_t tier = 4;
};

inline bool so_candidate_less(const SoCandidate& a, const SoCandidate& b) {
  if (a.tier != b.tier) return a.tier < b.tier;
  if (a.tier == 4 && a.owner_so_bytes != b.owner_so_bytes)
    return a.owner_so_bytes > b.owner_so_bytes;
  return a.id < b.id;
}

inline std::int64_t largest_owner_so_bytes(const Model& m, std::uint32_t slot) {
  const Page& p = m.page_at(slot);
  if (p.ref_count <= 1) return m.app(p.owner0).so_bytes();
  std::int64_t best = 0;
  for (AppId a : m.owners_of(slot)) best = std::max(best, m.app(a).so_bytes());
  return best;
}

/// `want` > 0 keeps only the first `want` victims in order; the result
/// is the exact prefix a full sort would produce.
inline std::vector<SoCandidate> collect_so_candidates(const Model& m, TimeMs now,
                                                      const SwapPolicyConfig& cfg,
                                                      std::size_t want = 0) {
  std::vector<SoCandidate> out;
  for (std::uint32_t slot = 0; slot < m.arena_size(); ++slot) {
    const Page& p = m.page_at(slot);
    if (!p.live || p.kind != PageKind::SO || p.location != Location::RESIDENT)
      continue;
    SoCandidate c;
    c.slot = slot;
    c.id = p.id;
    c.tier = static_cast<std::uint8_t>(so_victim_tier(p, now, cfg));
    if (c.tier == 4) c.owner_so_bytes = largest_owner_so_bytes(m, slot);
    out.push_back(c);
  }
  if (want > 0 && out.size() > want) {
    std::nth_element(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(want),
                     out.end(), so_candidate_less);
    out.resize(want);
  }
  std::sort(out.begin(), out.end(), so_candidate_less);
  return out;
}

struct LruCandidate {
  std::uint32_t slot = 0;
  PageId id = 0;
  TimeMs last_access = 0;
};

inline bool lru_less(const LruCandidate& a, const LruCandidate& b) {
  if (a.last_access != b.last_access) return a.last_access < b.last_access;
  return a.id < b.id;
}

/// Resident pages in LRU order. `anon_only` for the adaptive ANON phase;
/// otherwise SO+ANON (baseline LRU). FILE pages are never swapped.
inline std::vector<LruCandidate> collect_lru_candidates(const Model& m, bool anon_only,
                                                        std::size_t want = 0) {
  std::vector<LruCandidate> out;
  for (std::uint32_t slot = 0; slot < m.arena_size(); ++slot) {
    const Page& p = m.page_at(slot);
    if (!p.live || p.location != Location::RESIDENT) continue;
    if (p.kind == PageKind::FILE) continue;
    if (anon_only && p.kind != PageKind::ANON) continue;
    out.push_back({slot, p.id, p.last_access});
  }
  if (want > 0 && out.size() > want) {
    std::nth_element(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(want),
                     out.end(), lru_less);
    out.resize(want);
  }
  std::sort(out.begin(), out.end(), lru_less);
  return out;
}

}  // namespace detail

/// Strict 4-tier priority order over all resident SO pages.
inline std::vector<VictimRank> rank_so_victims(const Model& m, TimeMs now,
                                               const SwapPolicyConfig& cfg) {
  auto cands = detail::collect_so_candidates(m, now, cfg);
  std::vector<VictimRank> out;
  out.reserve(cands.size());
  for (const auto& c : cands) out.push_back({c.id, c.tier, c.owner_so_bytes});
  return out;
}

/// Swap-path decision. Pure function of page kind, sharing and the
/// owner's time-critical mark.
inline SwapPath route(const Page& page, const App& owner) {
  if (page.kind == PageKind::SO)
    return page.ref_count == 1 ? SwapPath::SLOW_SWAM : SwapPath::FAST_ZRAM;
  return owner.time_critical ? SwapPath::FAST_ZRAM : SwapPath::SLOW_SWAM;
}

/// One log record per swap movement; `zram_had_room` is sampled before
/// the page left RAM (the Fig.-1 gating rule is checked against it).
struct SwapRec {
  TimeMs time = 0;
  PageId page = 0;
  Location place = Location::ZRAM;  // destination (out) or source (in)
  PageKind kind = PageKind::ANON;
  bool is_in = false;
  bool zram_had_room = false;
  // Resident SO pages that were still eligible victims when this
  // swap-out happened; must be zero for every ANON swap-out.
  std::int64_t so_eligible_remaining = 0;
};

inline Result<double> swap_out(Model& m, PageId id, SwapPath path, TimeMs now,
                               const SwapPolicyConfig& cfg) {
  using R = Result<double>;
  std::uint32_t slot = m.slot_of(id);
  if (slot == Model::bad_slot) return R::failure(Err::Precondition, "unknown page");
  if (path == SwapPath::FAST_ZRAM) {
    auto r = m.move_resident_to_zram(slot);
    if (!r.ok()) return R::failure(r.err, r.msg);
    return R::success(cfg.zram_out_cost_ms);
  }
  auto r = m.move_resident_to_swam(slot, now, cfg.swam_file_capacity_pages);
  if (!r.ok()) return R::failure(r.err, r.msg);
  return R::success(cfg.slow_write_ms());
}

inline double swap_in_latency(const Model& m, Location from, PageKind kind,
                              AppId accessor, const SwapPolicyConfig& cfg) {
  switch (from) {
    case Location::ZRAM:
      return cfg.zram_in_cost_ms;
    case Location::SWAM_FILE:
    case Location::NAND:
      return cfg.slow_read_ms();
    case Location::NOT_PRESENT:
      // Reload from the app package; reclaimed SO pages additionally pay
      // their share of rebuilding PLT/GOT entries.
      return cfg.slow_read_ms() +
             (kind == PageKind::SO ? m.app(accessor).rebuild_share_ms : 0.0);
    case Location::RESIDENT:
      break;
  }
  return 0.0;
}

inline Result<double> swap_in(Model& m, PageId id, TimeMs now,
                              const SwapPolicyConfig& cfg) {
  using R = Result<double>;
  std::uint32_t slot = m.slot_of(id);
  if (slot == Model::bad_slot) return R::failure(Err::Precondition, "unknown page");
  AppId owner = m.page_at(slot).owner0;
  PageKind kind = m.page_at(slot).kind;
  auto r = m.move_to_resident(slot, now);
  if (!r.ok()) return R::failure(r.err, r.msg);
  return R::success(swap_in_latency(m, r.value.from, kind, owner, cfg));
}

struct AccessResult {
  bool hit = true;
  double latency_ms = 0.0;
  Location faulted_from = Location::RESIDENT;
};

/// Page access: bookkeeping plus the fault path. The caller must have
/// made resident room before faulting at high utilization.
inline Result<AccessResult> access(Model& m, AppId a, PageId id, TimeMs now,
                                   const SwapPolicyConfig& cfg) {
  using R = Result<AccessResult>;
  std::uint32_t slot = m.slot_of(id);
  if (slot == Model::bad_slot) return R::failure(Err::Precondition, "unknown page");
  if (!m.owns(slot, a)) return R::failure(Err::NotOwner);
  m.touch(slot, now);
  const Page& p = m.page_at(slot);
  if (p.location == Location::RESIDENT) return R::success({true, 0.0, Location::RESIDENT});
  Location from = p.location;
  PageKind kind = p.kind;
  auto r = m.move_to_resident(slot, now);
  if (!r.ok()) return R::failure(r.err, r.msg);
  return R::success({false, swap_in_latency(m, from, kind, a, cfg), from});
}

struct UnmapResult {
  std::int64_t checks = 0;
  double completion_ms = 0.0;
  bool preempted = false;
};

/// Granularity-adaptive unmap cost: one higher-priority check per unit;
/// a preemption inside the window adds the service delay once.
inline Result<UnmapResult> unmap_cost(std::int64_t total_bytes, std::int64_t unit_bytes,
                                      std::optional<double> hp_arrival_ms,
                                      const SwapPolicyConfig& cfg) {
  using R = Result<UnmapResult>;
  if (unit_bytes < page_bytes || unit_bytes % page_bytes != 0)
    return R::failure(Err::BadGranularity, "unit must be a multiple of 4096");
  if (total_bytes <= 0 || total_bytes % page_bytes != 0)
    return R::failure(Err::BadGranularity, "total must be a positive multiple of 4096");
  UnmapResult u;
  u.checks = (total_bytes + unit_bytes - 1) / unit_bytes;
  double base = static_cast<double>(u.checks) * cfg.per_check_cost_ms +
                static_cast<double>(total_bytes / page_bytes) * cfg.per_page_unmap_cost_ms;
  u.preempted = hp_arrival_ms.has_value() && *hp_arrival_ms >= 0.0 && *hp_arrival_ms < base;
  u.completion_ms = base + (u.preempted ? cfg.preempt_service_ms : 0.0);
  return R::success(u);
}

struct StepResult {
  std::int64_t freed_numerator = 0;  // reduction of resident + zram physical
  double latency_ms = 0.0;
  std::int64_t pages_out = 0;
  Err stall = Err::None;  // ZramFull / StorageFull / NandFull when blocked
};

namespace detail {

/// Execute one swap-out and append a record. Returns the numerator
/// reduction, or -1 with `stall` set when the target is full.
inline std::int64_t do_swap_out(Model& m, std::uint32_t slot, SwapPath path,
                                TimeMs now, const SwapPolicyConfig& cfg,
                                StepResult& res, std::vector<SwapRec>* log,
                                std::int64_t so_eligible) {
  Page& p = m.page_at(slot);
  bool had_room = m.zram_has_room();
  std::int64_t before = m.numerator();
  PageId id = p.id;
  PageKind kind = p.kind;
  if (path == SwapPath::FAST_ZRAM) {
    auto r = m.move_resident_to_zram(slot);
    if (!r.ok()) {
      res.stall = r.err;
      return -1;
    }
    res.latency_ms += cfg.zram_out_cost_ms;
  } else {
    auto r = m.move_resident_to_swam(slot, now, cfg.swam_file_capacity_pages);
    if (!r.ok()) {
      res.stall = r.err;
      return -1;
    }
    res.latency_ms += cfg.slow_write_ms();
  }
  res.pages_out++;
  if (log)
    log->push_back({now, id, path == SwapPath::FAST_ZRAM ? Location::ZRAM : Location::SWAM_FILE,
                    kind, false, had_room, so_eligible});
  return before - m.numerator();
}

}  // namespace detail

/// SWAM swap stage: ranked SO victims first; normal pages only once no
/// swappable resident SO page remains. A victim whose only path is full
/// stays resident, and the blocking error is reported so the caller can
/// run the matching cleaner and retry.
inline StepResult adaptive_swap_step(Model& m, TimeMs now, std::int64_t bytes_needed,
                                     const SwapPolicyConfig& cfg,
                                     std::vector<SwapRec>* log = nullptr) {
  StepResult res;
  if (bytes_needed <= 0) return res;
  // Candidate prefix large enough for the request; the caller loops when
  // a truncated scan turns out short.
  const std::size_t want =
      static_cast<std::size_t>(bytes_needed / page_bytes + bytes_needed / (page_bytes * 4)) +
      512;

  bool zram_blocked = false;
  bool storage_blocked = false;
  if (m.resident_so_pages() > 0) {
    auto so_cands = detail::collect_so_candidates(m, now, cfg, want);
    for (const auto& c : so_cands) {
      if (res.freed_numerator >= bytes_needed) break;
      const Page& p = m.page_at(c.slot);
      SwapPath path = route(p, m.app(p.owner0));
      if ((path == SwapPath::FAST_ZRAM && zram_blocked) ||
          (path == SwapPath::SLOW_SWAM && storage_blocked))
        continue;
      std::int64_t freed = detail::do_swap_out(m, c.slot, path, now, cfg, res, log,
                                               m.resident_so_pages());
      if (freed < 0) {
        if (res.stall == Err::ZramFull) zram_blocked = true;
        else storage_blocked = true;
        continue;
      }
      res.freed_numerator += freed;
    }
  }
  // Normal pages are touched only once every swappable resident SO page
  // is gone. SO pages whose only path is blocked stop being swappable;
  // holding the scan for them would wedge reclamation entirely.
  std::int64_t blocked_so = 0;
  if (zram_blocked) blocked_so += m.resident_shared_so_pages();
  if (storage_blocked) blocked_so += m.resident_so_pages() - m.resident_shared_so_pages();
  std::int64_t so_eligible = m.resident_so_pages() - blocked_so;
  if (res.freed_numerator >= bytes_needed || so_eligible > 0) return res;

  res.stall = Err::None;
  auto anon = detail::collect_lru_candidates(m, /*anon_only=*/true, want);
  for (const auto& c : anon) {
    if (res.freed_numerator >= bytes_needed) break;
    const Page& p = m.page_at(c.slot);
    SwapPath path = route(p, m.app(p.owner0));
    // The fast path is a preference for normal pages; a full ZRAM falls
    // back to the slow path rather than pinning the page in RAM.
    if (path == SwapPath::FAST_ZRAM && zram_blocked) path = SwapPath::SLOW_SWAM;
    if (path == SwapPath::SLOW_SWAM && storage_blocked) continue;
    std::int64_t freed = detail::do_swap_out(m, c.slot, path, now, cfg, res, log,
                                             /*so_eligible=*/0);
    if (freed < 0) {
      if (res.stall == Err::ZramFull) {
        zram_blocked = true;
        freed = detail::do_swap_out(m, c.slot, SwapPath::SLOW_SWAM, now, cfg, res, log, 0);
        if (freed < 0) {
          storage_blocked = true;
          continue;
        }
      } else {
        storage_blocked = true;
        continue;
      }
    }
    res.freed_numerator += freed;
  }
  if (res.freed_numerator >= bytes_needed) res.stall = Err::None;
  else if (storage_blocked) res.stall = Err::StorageFull;
  else if (zram_blocked) res.stall = Err::ZramFull;
  else res.stall = Err::None;  // victims exhausted
  return res;
}

/// Conventional swap stage: plain LRU over SO+ANON, no path choice.
/// ZRAM_NAND falls back to the NAND partition only when the page does
/// not fit in ZRAM (gating rule of the combined scheme).
inline StepResult baseline_swap_step(Model& m, TimeMs now, std::int64_t bytes_needed,
                                     const SwapPolicyConfig& cfg, Policy policy,
                                     std::vector<SwapRec>* log = nullptr) {
  StepResult res;
  if (bytes_needed <= 0) return res;
  const std::size_t want =
      static_cast<std::size_t>(bytes_needed / page_bytes + bytes_needed / (page_bytes * 4)) +
      512;
  auto cands = detail::collect_lru_candidates(m, /*anon_only=*/false, want);
  for (const auto& c : cands) {
    if (res.freed_numerator >= bytes_needed) break;
    bool zram_ok = policy != Policy::NAND_SWAP && m.zram_has_room();
    std::int64_t before = m.numerator();
    if (zram_ok) {
      auto r = m.move_resident_to_zram(c.slot);
      if (!r.ok()) {
        res.stall = r.err;
        break;
      }
      res.latency_ms += cfg.zram_out_cost_ms;
      if (log)
        log->push_back({now, c.id, Location::ZRAM, m.page_at(c.slot).kind, false, true, 0});
    } else if (policy == Policy::NAND_SWAP || policy == Policy::ZRAM_NAND) {
      bool had_room = m.zram_has_room();
      auto r = m.move_resident_to_nand(c.slot);
      if (!r.ok()) {
        res.stall = r.err;
        break;
      }
      res.latency_ms += cfg.slow_write_ms();
      if (log)
        log->push_back({now, c.id, Location::NAND, m.page_at(c.slot).kind, false, had_room, 0});
    } else {
      res.stall = Err::ZramFull;  // pure ZRAM policy with a full device
      break;
    }
    res.pages_out++;
    res.freed_numerator += before - m.numerator();
  }
  if (res.freed_numerator >= bytes_needed) res.stall = Err::None;
  return res;
}

}  // namespace swamsim
