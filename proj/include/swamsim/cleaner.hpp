#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "swamsim/model.hpp"
#include "swamsim/types.hpp"

namespace swamsim {

struct CleanerConfig {
  TimeMs isop_interval_ms = 10 * minute_ms;
  TimeMs isop_cold_threshold_ms = 30 * minute_ms;  // no-swap-in age
  double storage_low_watermark = 0.10;
  TimeMs isop_fast_interval_ms = 1 * minute_ms;
};

enum class EraserKind : std::uint8_t { SO_ERASER, ISOP_ERASER };

struct CleanRec {
  TimeMs time = 0;
  EraserKind eraser = EraserKind::SO_ERASER;
  FileId file = 0;  // ISOP only
  std::int64_t pages = 0;
  std::int64_t bytes = 0;  // physical ZRAM bytes (SO) or storage bytes (ISOP)
};

/// SO Eraser: drop compressed SO pages from ZRAM, no I/O. Victims in
/// ascending (access_count, ref_count) order; reclaimed pages become
/// NOT_PRESENT and pay the PLT/GOT rebuild cost on their next access.
inline Result<std::vector<PageId>> so_erase(Model& m, std::int64_t bytes_needed,
                                            TimeMs now,
                                            std::vector<CleanRec>* log = nullptr) {
  using R = Result<std::vector<PageId>>;
  struct Cand {
    std::uint32_t slot;
    PageId id;
    std::uint32_t access_count;
    std::uint16_t ref_count;
  };
  std::vector<Cand> cands;
  for (std::uint32_t slot = 0; slot < m.arena_size(); ++slot) {
    const Page& p = m.page_at(slot);
    if (p.live && p.kind == PageKind::SO && p.location == Location::ZRAM)
      cands.push_back({slot, p.id, p.access_count, p.ref_count});
  }
  if (cands.empty()) return R::failure(Err::NothingToClean);
  std::vector<PageId> reclaimed;
  if (bytes_needed <= 0) return R::success(std::move(reclaimed));

  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.access_count != b.access_count) return a.access_count < b.access_count;
    if (a.ref_count != b.ref_count) return a.ref_count < b.ref_count;
    return a.id < b.id;
  });

  std::int64_t phys_before = m.mem().zram_stored_physical;
  for (const Cand& c : cands) {
    if (phys_before - m.mem().zram_stored_physical >= bytes_needed) break;
    m.drop_zram_so(c.slot);
    reclaimed.push_back(c.id);
  }
  if (log && !reclaimed.empty())
    log->push_back({now, EraserKind::SO_ERASER, 0,
                    static_cast<std::int64_t>(reclaimed.size()),
                    phys_before - m.mem().zram_stored_physical});
  return R::success(std::move(reclaimed));
}

struct IsopResult {
  std::vector<FileId> unlinked;
  std::int64_t pages_dropped = 0;
  bool below_watermark = false;
  TimeMs active_interval_ms = 0;
};

namespace detail {

/// SO-holding swam files in LRU order of last swap-in.
inline std::vector<std::pair<TimeMs, FileId>> so_files_lru(const Model& m) {
  std::vector<std::pair<TimeMs, FileId>> files;
  for (const auto& [fid, f] : m.mem().swam_files)
    if (f.holds_so) files.push_back({f.last_swap_in, fid});
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace detail

/// ISOP Eraser periodic tick: unlink swam files whose pages have not
/// been swapped in for the cold threshold, oldest first; below the
/// storage watermark it keeps deleting the coldest files until the
/// watermark is met, and the tick interval shortens.
inline IsopResult isop_tick(Model& m, TimeMs now, const CleanerConfig& cfg,
                            std::vector<CleanRec>* log = nullptr) {
  IsopResult out;
  auto files = detail::so_files_lru(m);
  std::size_t i = 0;
  auto unlink = [&](FileId fid) {
    std::int64_t bytes = m.mem().swam_files.at(fid).bytes();
    auto dropped = m.delete_swam_file(fid);
    out.unlinked.push_back(fid);
    out.pages_dropped += static_cast<std::int64_t>(dropped.size());
    if (log)
      log->push_back({now, EraserKind::ISOP_ERASER, fid,
                      static_cast<std::int64_t>(dropped.size()), bytes});
  };
  for (; i < files.size(); ++i) {
    if (now - files[i].first <= cfg.isop_cold_threshold_ms) break;
    unlink(files[i].second);
  }
  while (m.mem().storage_free_fraction() < cfg.storage_low_watermark &&
         i < files.size()) {
    unlink(files[i].second);
    i++;
  }
  out.below_watermark = m.mem().storage_free_fraction() < cfg.storage_low_watermark;
  out.active_interval_ms =
      out.below_watermark ? cfg.isop_fast_interval_ms : cfg.isop_interval_ms;
  return out;
}

/// StorageFull escalation path: shed the coldest SO files until the
/// requested storage bytes are free (or nothing is left to shed).
inline IsopResult isop_emergency(Model& m, TimeMs now, std::int64_t bytes_needed,
                                 const CleanerConfig& cfg,
                                 std::vector<CleanRec>* log = nullptr) {
  IsopResult out;
  std::int64_t free_before = m.mem().storage_free();
  for (const auto& [ls, fid] : detail::so_files_lru(m)) {
    if (m.mem().storage_free() - free_before >= bytes_needed) break;
    std::int64_t bytes = m.mem().swam_files.at(fid).bytes();
    auto dropped = m.delete_swam_file(fid);
    out.unlinked.push_back(fid);
    out.pages_dropped += static_cast<std::int64_t>(dropped.size());
    if (log)
      log->push_back({now, EraserKind::ISOP_ERASER, fid,
                      static_cast<std::int64_t>(dropped.size()), bytes});
  }
  out.below_watermark = m.mem().storage_free_fraction() < cfg.storage_low_watermark;
  out.active_interval_ms =
      out.below_watermark ? cfg.isop_fast_interval_ms : cfg.isop_interval_ms;
  return out;
}

}  // namespace swamsim
