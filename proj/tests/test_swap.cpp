#include <catch2/catch.hpp>

#include <algorithm>
#include <optional>

#include "test_helpers.hpp"

#include "swamsim/model.hpp"
#include "swamsim/rng.hpp"
#include "swamsim/swap.hpp"

using namespace swamsim;
using swamtest::plain_app;
using swamtest::small_device;

namespace {

// Brute-force victim ordering, written from the priority rules directly.
struct OracleVictim {
  PageId id;
  int tier;
  std::int64_t owner_bytes;
};

int oracle_tier(const Model& m, std::uint32_t slot, TimeMs now,
                const SwapPolicyConfig& cfg) {
  const Page& p = m.page_at(slot);
  if (now - p.last_access > cfg.recency_window_ms) return 1;
  if (p.ref_count < cfg.ref_count_threshold) return 2;
  if (p.swapped_in_after_out) return 3;
  return 4;
}

std::vector<OracleVictim> oracle_rank(const Model& m, TimeMs now,
                                      const SwapPolicyConfig& cfg) {
  std::vector<OracleVictim> out;
  for (std::uint32_t slot = 0; slot < m.arena_size(); ++slot) {
    const Page& p = m.page_at(slot);
    if (!p.live || p.kind != PageKind::SO || p.location != Location::RESIDENT) continue;
    std::int64_t bytes = 0;
    for (AppId a : m.owners_of(slot)) bytes = std::max(bytes, m.app(a).so_bytes());
    out.push_back({p.id, oracle_tier(m, slot, now, cfg), bytes});
  }
  auto before = [](const OracleVictim& x, const OracleVictim& y) {
    if (x.tier != y.tier) return x.tier < y.tier;
    if (x.tier == 4 && x.owner_bytes != y.owner_bytes) return x.owner_bytes > y.owner_bytes;
    return x.id < y.id;
  };
  // Selection sort: repeatedly pick the pairwise minimum.
  std::vector<OracleVictim> sorted;
  while (!out.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.size(); ++i)
      if (before(out[i], out[best])) best = i;
    sorted.push_back(out[best]);
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return sorted;
}

}  // namespace

TEST_CASE("tier 1 (stale) outranks tier 2 (low sharing)") {
  Model m(small_device());
  SwapPolicyConfig cfg;
  AppId a1 = m.add_app(plain_app("a1"));
  AppId a2 = m.add_app(plain_app("a2"));
  TimeMs now = 10 * cfg.recency_window_ms;

  PageId stale = m.allocate(a1, 1, PageKind::SO, 0).value[0];
  m.touch(m.slot_of(stale), now - 2 * cfg.recency_window_ms);
  m.share_so_page(stale, a2);  // shared and stale -> tier 1

  PageId fresh = m.allocate(a1, 1, PageKind::SO, 0).value[0];
  m.touch(m.slot_of(fresh), now);  // recent, ref 1 -> tier 2

  auto ranked = rank_so_victims(m, now, cfg);
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].page == stale);
  CHECK(ranked[0].tier == 1);
  CHECK(ranked[1].page == fresh);
  CHECK(ranked[1].tier == 2);
}

TEST_CASE("rank of an empty page set is empty") {
  Model m(small_device());
  CHECK(rank_so_victims(m, 0, SwapPolicyConfig{}).empty());
}

TEST_CASE("ranking equals the brute-force pairwise comparator") {
  SwapPolicyConfig cfg;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    swamtest::RandomModel rm(seed, 8, 50 + static_cast<int>(seed) * 10);
    TimeMs now = 150'000;
    auto got = rank_so_victims(rm.model, now, cfg);
    auto want = oracle_rank(rm.model, now, cfg);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].page == want[i].id);
      CHECK(got[i].tier == want[i].tier);
    }
  }
}

TEST_CASE("route is a pure function of kind, sharing, and criticality") {
  Model m(small_device());
  AppId a1 = m.add_app(plain_app("a1", OomBand::CACHED, false));
  AppId tc = m.add_app(plain_app("tc", OomBand::CACHED, true));

  PageId solo_so = m.allocate(a1, 1, PageKind::SO, 0).value[0];
  CHECK(route(m.page_at(m.slot_of(solo_so)), m.app(a1)) == SwapPath::SLOW_SWAM);

  PageId shared_so = m.allocate(a1, 1, PageKind::SO, 0).value[0];
  m.share_so_page(shared_so, tc);
  m.share_so_page(shared_so, m.add_app(plain_app("a3")));
  CHECK(route(m.page_at(m.slot_of(shared_so)), m.app(a1)) == SwapPath::FAST_ZRAM);

  PageId anon_tc = m.allocate(tc, 1, PageKind::ANON, 0).value[0];
  CHECK(route(m.page_at(m.slot_of(anon_tc)), m.app(tc)) == SwapPath::FAST_ZRAM);

  PageId anon = m.allocate(a1, 1, PageKind::ANON, 0).value[0];
  CHECK(route(m.page_at(m.slot_of(anon)), m.app(a1)) == SwapPath::SLOW_SWAM);
}

TEST_CASE("swap_out accounting and file reuse") {
  Model m(small_device());
  SwapPolicyConfig cfg;
  cfg.swam_file_capacity_pages = 2;
  AppId a = m.add_app(plain_app("a1"));

  PageId p1 = m.allocate(a, 1, PageKind::ANON, 0).value[0];
  auto fast = swap_out(m, p1, SwapPath::FAST_ZRAM, 0, cfg);
  REQUIRE(fast.ok());
  CHECK(fast.value == cfg.zram_out_cost_ms);
  CHECK(m.mem().zram_stored_physical == 1639);

  PageId p2 = m.allocate(a, 1, PageKind::ANON, 0).value[0];
  PageId p3 = m.allocate(a, 1, PageKind::ANON, 0).value[0];
  PageId p4 = m.allocate(a, 1, PageKind::ANON, 0).value[0];
  REQUIRE(swap_out(m, p2, SwapPath::SLOW_SWAM, 10, cfg).ok());
  CHECK(m.mem().swam_files.size() == 1);
  REQUIRE(swap_out(m, p3, SwapPath::SLOW_SWAM, 11, cfg).ok());
  CHECK(m.mem().swam_files.size() == 1);  // still room in the open file
  REQUIRE(swap_out(m, p4, SwapPath::SLOW_SWAM, 12, cfg).ok());
  CHECK(m.mem().swam_files.size() == 2);  // capacity 2 forced a new file
  CHECK(m.audit_full() == 0);
}

TEST_CASE("swap_out reports full targets") {
  DeviceConfig dev = small_device(64, 0, 1);
  dev.storage_used_other_bytes = mib(1);  // no storage room at all
  Model m(dev);
  SwapPolicyConfig cfg;
  AppId a = m.add_app(plain_app("a1"));
  PageId p = m.allocate(a, 1, PageKind::ANON, 0).value[0];
  CHECK(swap_out(m, p, SwapPath::FAST_ZRAM, 0, cfg).err == Err::ZramFull);
  CHECK(swap_out(m, p, SwapPath::SLOW_SWAM, 0, cfg).err == Err::StorageFull);
}

TEST_CASE("swap_in restores accounting exactly (round trip)") {
  Model m(small_device());
  SwapPolicyConfig cfg;
  AppId a = m.add_app(plain_app("a1"));
  m.allocate(a, 20, PageKind::ANON, 0);
  PageId p = m.allocate(a, 1, PageKind::SO, 0).value[0];

  auto snapshot = [&] {
    const MemoryState& ms = m.mem();
    return std::tuple(ms.resident_bytes, ms.zram_stored_logical, ms.zram_stored_physical,
                      ms.swam_bytes_total, ms.nand_used, ms.storage_free(),
                      m.live_page_count());
  };

  auto before = snapshot();
  REQUIRE(swap_out(m, p, SwapPath::FAST_ZRAM, 5, cfg).ok());
  auto in = swap_in(m, p, 6, cfg);
  REQUIRE(in.ok());
  CHECK(in.value == cfg.zram_in_cost_ms);
  CHECK(snapshot() == before);

  REQUIRE(swap_out(m, p, SwapPath::SLOW_SWAM, 7, cfg).ok());
  auto in2 = swap_in(m, p, 8, cfg);
  REQUIRE(in2.ok());
  CHECK(in2.value == Approx(cfg.slow_read_ms()));
  CHECK(snapshot() == before);

  CHECK(swap_in(m, p, 9, cfg).err == Err::AlreadyResident);
  CHECK(m.audit_full() == 0);
}

TEST_CASE("access: hit, zram fault, swam fault, not-owner") {
  Model m(small_device());
  SwapPolicyConfig cfg;
  AppId a = m.add_app(plain_app("a1"));
  AppId other = m.add_app(plain_app("a2"));
  PageId p = m.allocate(a, 1, PageKind::ANON, 0).value[0];

  auto hit = access(m, a, p, 100, cfg);
  REQUIRE(hit.ok());
  CHECK(hit.value.hit);
  CHECK(hit.value.latency_ms == 0.0);
  CHECK(m.page_at(m.slot_of(p)).access_count == 1);

  CHECK(access(m, other, p, 101, cfg).err == Err::NotOwner);

  REQUIRE(swap_out(m, p, SwapPath::FAST_ZRAM, 102, cfg).ok());
  auto f1 = access(m, a, p, 103, cfg);
  REQUIRE(f1.ok());
  CHECK_FALSE(f1.value.hit);
  CHECK(f1.value.latency_ms == Approx(cfg.zram_in_cost_ms));

  REQUIRE(swap_out(m, p, SwapPath::SLOW_SWAM, 104, cfg).ok());
  auto f2 = access(m, a, p, 105, cfg);
  REQUIRE(f2.ok());
  CHECK(f2.value.latency_ms == Approx(4096.0 / cfg.storage_read_bw));
  CHECK(m.page_at(m.slot_of(p)).last_access == 105);
}

TEST_CASE("faults from the NAND partition cost a storage read") {
  DeviceConfig dev = small_device();
  dev.nand_partition_bytes = mib(4);
  Model m(dev);
  SwapPolicyConfig cfg;
  AppId a = m.add_app(plain_app("a1"));
  PageId p = m.allocate(a, 1, PageKind::ANON, 0).value[0];
  REQUIRE(m.move_resident_to_nand(m.slot_of(p)).ok());
  CHECK(m.mem().nand_used == page_bytes);
  auto f = access(m, a, p, 10, cfg);
  REQUIRE(f.ok());
  CHECK(f.value.latency_ms == Approx(cfg.slow_read_ms()));
  CHECK(m.mem().nand_used == 0);
  CHECK(m.audit_full() == 0);
}

TEST_CASE("drop_zram_so rejects wrong locations and kinds") {
  Model m(small_device());
  AppId a = m.add_app(plain_app("a1"));
  PageId so = m.allocate(a, 1, PageKind::SO, 0).value[0];
  CHECK(m.drop_zram_so(m.slot_of(so)).err == Err::Precondition);  // resident
  PageId anon = m.allocate(a, 1, PageKind::ANON, 0).value[0];
  m.move_resident_to_zram(m.slot_of(anon));
  CHECK(m.drop_zram_so(m.slot_of(anon)).err == Err::Precondition);  // not SO
}

TEST_CASE("unmap cost check counts") {
  SwapPolicyConfig cfg;
  auto r1 = unmap_cost(100 * mib(1), 32 * 1024, std::nullopt, cfg);
  REQUIRE(r1.ok());
  CHECK(r1.value.checks == 3200);

  auto r2 = unmap_cost(100 * mib(1), 4 * mib(1), std::nullopt, cfg);
  REQUIRE(r2.ok());
  CHECK(r2.value.checks == 25);

  auto r3 = unmap_cost(64 * 1024, 64 * 1024, std::nullopt, cfg);
  REQUIRE(r3.ok());
  CHECK(r3.value.checks == 1);

  CHECK(unmap_cost(8192, 1000, std::nullopt, cfg).err == Err::BadGranularity);
  CHECK(unmap_cost(1000, 4096, std::nullopt, cfg).err == Err::BadGranularity);
  CHECK(unmap_cost(0, 4096, std::nullopt, cfg).err == Err::BadGranularity);
}

TEST_CASE("unmap covers the region with minimal checks") {
  SwapPolicyConfig cfg;
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    std::int64_t total = static_cast<std::int64_t>(1 + rng.below(4096)) * page_bytes;
    std::int64_t unit = static_cast<std::int64_t>(1 + rng.below(64)) * page_bytes;
    auto r = unmap_cost(total, unit, std::nullopt, cfg);
    REQUIRE(r.ok());
    CHECK(r.value.checks * unit >= total);
    CHECK((r.value.checks - 1) * unit < total);
  }
}

TEST_CASE("unmap preemption adds the service delay inside the window") {
  SwapPolicyConfig cfg;
  auto base = unmap_cost(mib(1), 64 * 1024, std::nullopt, cfg);
  REQUIRE(base.ok());
  auto hit = unmap_cost(mib(1), 64 * 1024, base.value.completion_ms * 0.5, cfg);
  REQUIRE(hit.ok());
  CHECK(hit.value.preempted);
  CHECK(hit.value.completion_ms ==
        Approx(base.value.completion_ms + cfg.preempt_service_ms));
  auto miss = unmap_cost(mib(1), 64 * 1024, base.value.completion_ms + 1.0, cfg);
  REQUIRE(miss.ok());
  CHECK_FALSE(miss.value.preempted);
  CHECK(miss.value.completion_ms == Approx(base.value.completion_ms));
}

TEST_CASE("adaptive step prefers SO pages over hot normal pages") {
  Model m(small_device());
  SwapPolicyConfig cfg;
  AppId a = m.add_app(plain_app("a1"));
  TimeMs now = 200'000;

  PageId so1 = m.allocate(a, 1, PageKind::SO, 0).value[0];
  PageId so2 = m.allocate(a, 1, PageKind::SO, 0).value[0];
  std::vector<PageId> hot;
  for (int i = 0; i < 5; ++i) {
    PageId p = m.allocate(a, 1, PageKind::ANON, 0).value[0];
    m.touch(m.slot_of(p), now);  // hot
    hot.push_back(p);
  }
  std::vector<SwapRec> log;
  auto res = adaptive_swap_step(m, now, page_bytes, cfg, &log);
  CHECK(res.freed_numerator >= page_bytes);
  REQUIRE_FALSE(log.empty());
  CHECK((log[0].page == so1 || log[0].page == so2));
  for (PageId p : hot)
    CHECK(m.page_at(m.slot_of(p)).location == Location::RESIDENT);
}

TEST_CASE("adaptive step with zero demand does nothing") {
  swamtest::RandomModel rm(3, 4, 100);
  std::vector<SwapRec> log;
  auto res = adaptive_swap_step(rm.model, 1000, 0, SwapPolicyConfig{}, &log);
  CHECK(res.pages_out == 0);
  CHECK(log.empty());
}

namespace {

// Straight-line oracle of the adaptive step: re-ranks after every single
// swap-out and applies the routing rules one page at a time.
std::vector<PageId> oracle_adaptive_sequence(Model m, TimeMs now, std::int64_t need,
                                             const SwapPolicyConfig& cfg) {
  std::vector<PageId> seq;
  std::int64_t freed = 0;
  while (freed < need) {
    std::optional<PageId> pick;
    if (m.resident_so_pages() > 0) {
      auto ranked = oracle_rank(m, now, cfg);
      if (ranked.empty()) break;
      pick = ranked.front().id;
    } else {
      std::optional<PageId> best;
      TimeMs best_t = 0;
      for (std::uint32_t slot = 0; slot < m.arena_size(); ++slot) {
        const Page& p = m.page_at(slot);
        if (!p.live || p.kind != PageKind::ANON || p.location != Location::RESIDENT)
          continue;
        if (!best || p.last_access < best_t ||
            (p.last_access == best_t && p.id < *best)) {
          best = p.id;
          best_t = p.last_access;
        }
      }
      if (!best) break;
      pick = best;
    }
    std::uint32_t slot = m.slot_of(*pick);
    SwapPath path = route(m.page_at(slot), m.app(m.page_at(slot).owner0));
    std::int64_t before = m.numerator();
    bool ok = path == SwapPath::FAST_ZRAM
                  ? m.move_resident_to_zram(slot).ok()
                  : m.move_resident_to_swam(slot, now, cfg.swam_file_capacity_pages).ok();
    if (!ok) break;  // targets sized generously in these tests
    seq.push_back(*pick);
    freed += before - m.numerator();
  }
  return seq;
}

}  // namespace

TEST_CASE("adaptive step sequence equals the straight-line oracle") {
  SwapPolicyConfig cfg;
  for (std::uint64_t seed = 21; seed <= 26; ++seed) {
    swamtest::RandomModel base(seed, 6, 200);
    TimeMs now = 250'000;
    std::int64_t need = 40 * page_bytes;

    auto want = oracle_adaptive_sequence(base.model, now, need, cfg);

    std::vector<SwapRec> log;
    auto res = adaptive_swap_step(base.model, now, need, cfg, &log);
    REQUIRE(res.stall == Err::None);
    REQUIRE(log.size() == want.size());
    for (std::size_t i = 0; i < log.size(); ++i) CHECK(log[i].page == want[i]);
  }
}

TEST_CASE("no ANON page is swapped out while an eligible SO page is resident") {
  SwapPolicyConfig cfg;
  for (std::uint64_t seed = 31; seed <= 40; ++seed) {
    swamtest::RandomModel rm(seed, 5, 150);
    std::vector<SwapRec> log;
    adaptive_swap_step(rm.model, 300'000, 80 * page_bytes, cfg, &log);
    bool seen_anon = false;
    for (const SwapRec& r : log) {
      if (r.kind == PageKind::ANON) {
        seen_anon = true;
        CHECK(r.so_eligible_remaining == 0);
      } else if (r.kind == PageKind::SO) {
        CHECK_FALSE(seen_anon);  // all SO outs precede the first ANON out
      }
    }
  }
}

TEST_CASE("baseline ZRAM_NAND never uses the partition while zram has room") {
  DeviceConfig dev = small_device(64, 1, 64);
  dev.nand_partition_bytes = mib(8);
  Model m2(dev);
  SwapPolicyConfig cfg;
  AppId a = m2.add_app(plain_app("a1"));
  m2.allocate(a, 2000, PageKind::ANON, 0);
  std::vector<SwapRec> log;
  auto res = baseline_swap_step(m2, 10, 1500 * page_bytes, cfg, Policy::ZRAM_NAND, &log);
  CHECK(res.pages_out > 0);
  bool used_nand = false;
  for (const SwapRec& r : log) {
    if (r.place == Location::NAND) {
      used_nand = true;
      CHECK_FALSE(r.zram_had_room);
    }
  }
  CHECK(used_nand);  // 1 MiB of zram cannot hold 1500 pages
  CHECK(m2.audit_full() == 0);
}
