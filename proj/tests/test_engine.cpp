#include <catch2/catch.hpp>

#include "swamsim/engine.hpp"
#include "swamsim/report.hpp"
#include "swamsim/workload.hpp"

using namespace swamsim;

namespace {

/// One app on a small device; page counts sized so single GROW events
/// can push utilization across chosen thresholds.
ScenarioConfig bench_scenario(Policy policy, std::int64_t ram_mb = 64) {
  ScenarioConfig cfg;
  cfg.seed = 11;
  cfg.policy = policy;
  cfg.device.ram_bytes = mib(ram_mb);
  cfg.device.zram_bytes = mib(8);
  cfg.device.storage_bytes = mib(256);
  cfg.device.storage_used_other_bytes = 0;
  cfg.device.nand_partition_bytes = mib(16);
  cfg.workload.days = 1;
  cfg.workload.idle_touch_pages = 0;
  cfg.workload.apps.clear();
  for (int i = 0; i < 4; ++i) {
    AppSpec s;
    s.name = "app" + std::to_string(i);
    s.role = Role::BACKGROUND;
    s.working_set_mb = 4;
    s.n_symbols = 100;
    cfg.workload.apps.push_back(s);
  }
  return cfg;
}

std::int64_t pages_for_util(const ScenarioConfig& cfg, double util) {
  return static_cast<std::int64_t>(util * static_cast<double>(cfg.device.ram_bytes)) /
         page_bytes;
}

}  // namespace

TEST_CASE("no stage runs below the swap threshold") {
  ScenarioConfig cfg = bench_scenario(Policy::SWAM);
  Trace tr;
  tr.seed = cfg.seed;
  tr.events.push_back({0, EventKind::BOOT_LAUNCH, 0, 0});
  tr.events.push_back({10, EventKind::GROW, 0, static_cast<std::uint64_t>(
                                                  pages_for_util(cfg, 0.55) - 4 * 256)});
  Engine e(cfg, Policy::SWAM);
  for (const auto& ev : tr.events) e.step(ev);
  CHECK(e.model().utilization() < 0.60);
  CHECK(e.metrics().swap_out_pages == 0);
  CHECK(e.metrics().kills.empty());
}

TEST_CASE("crossing the swap threshold runs only the swap stage") {
  ScenarioConfig cfg = bench_scenario(Policy::SWAM);
  Trace tr;
  tr.seed = cfg.seed;
  tr.events.push_back({0, EventKind::BOOT_LAUNCH, 0, 0});
  tr.events.push_back({10, EventKind::GROW, 0, static_cast<std::uint64_t>(
                                                  pages_for_util(cfg, 0.62) - 4 * 256)});
  Engine e(cfg, Policy::SWAM);
  for (const auto& ev : tr.events) e.step(ev);
  CHECK(e.metrics().swap_out_pages > 0);
  CHECK(e.metrics().kills.empty());
  // Hysteresis: the stage frees down to threshold - 0.05.
  CHECK(e.model().utilization() <= 0.56);
  CHECK(e.model().utilization() >= 0.50);
}

TEST_CASE("a contrived full system escalates to the killer stage") {
  // Tiny zram and storage: the swap stage and the cleaners cannot source
  // enough space, so the chain must end in an EOOM kill.
  ScenarioConfig cfg = bench_scenario(Policy::SWAM);
  cfg.device.zram_bytes = mib(1);
  cfg.device.storage_bytes = mib(1);
  cfg.device.storage_used_other_bytes = mib(1);
  cfg.device.nand_partition_bytes = 0;
  cfg.workload.apps[0].n_symbols = 5;  // the app that grows is the cheapest victim

  Trace tr;
  tr.seed = cfg.seed;
  for (AppId a = 0; a < 4; ++a) tr.events.push_back({0, EventKind::BOOT_LAUNCH, a, 0});
  tr.events.push_back({10, EventKind::GROW, 0, static_cast<std::uint64_t>(
                                                  pages_for_util(cfg, 0.95) - 16 * 256)});
  Engine e(cfg, Policy::SWAM, {});
  for (const auto& ev : tr.events) e.step(ev);

  // The grown app dominates memory, so a single kill settles the system.
  REQUIRE(e.metrics().kills.size() == 1);
  CHECK(e.metrics().kills[0].killer == KillerKind::EOOM);
  CHECK(e.model().utilization() < cfg.thresholds.oomk_threshold);
  CHECK(e.metrics().audit_violations == 0);
}

TEST_CASE("baseline chain uses LMKD before OOMK") {
  ScenarioConfig cfg = bench_scenario(Policy::ZRAM);
  cfg.device.zram_bytes = mib(1);
  Trace tr;
  tr.seed = cfg.seed;
  for (AppId a = 0; a < 4; ++a) tr.events.push_back({0, EventKind::BOOT_LAUNCH, a, 0});
  tr.events.push_back({10, EventKind::GROW, 0, static_cast<std::uint64_t>(
                                                  pages_for_util(cfg, 0.85) - 16 * 256)});
  auto log = replay(tr, cfg, Policy::ZRAM);
  REQUIRE_FALSE(log.kills.empty());
  for (const KillEvent& k : log.kills) CHECK(k.killer == KillerKind::LMKD);
}

TEST_CASE("clock is monotone and engine is deterministic") {
  ScenarioConfig cfg = default_scenario(DeviceProfile::LOW_END, 9);
  cfg.workload.days = 2;
  auto tr = generate(cfg);
  REQUIRE(tr.ok());

  Engine e(cfg, Policy::ZRAM_NAND);
  TimeMs last = 0;
  for (const auto& ev : tr.value.events) {
    e.step(ev);
    CHECK(e.clock() >= last);
    last = e.clock();
  }

  auto log1 = replay(tr.value, cfg, Policy::ZRAM_NAND);
  auto log2 = replay(tr.value, cfg, Policy::ZRAM_NAND);
  for (std::size_t d = 1; d < log1.days.size(); ++d)
    CHECK(log1.days[d].kills_cumulative >= log1.days[d - 1].kills_cumulative);
  CHECK(log1.kills.size() == log2.kills.size());
  CHECK(log1.response_sum_ms == log2.response_sum_ms);
  CHECK(log1.launch_sum_ms == log2.launch_sum_ms);
  CHECK(log1.swap_out_pages == log2.swap_out_pages);

  std::string csv1, csv2;
  for (const DayRow& r : log1.days) csv1 += metrics_csv_row(r);
  for (const DayRow& r : log2.days) csv2 += metrics_csv_row(r);
  CHECK(csv1 == csv2);
}

TEST_CASE("ZRAM_NAND run never writes the partition while zram has room") {
  ScenarioConfig cfg = default_scenario(DeviceProfile::LOW_END, 13);
  cfg.workload.days = 3;
  auto tr = generate(cfg);
  REQUIRE(tr.ok());
  auto log = replay(tr.value, cfg, Policy::ZRAM_NAND);
  CHECK(log.slow_out_pages > 0);  // the partition did get used
  CHECK(log.slow_out_with_zram_room == 0);
}

TEST_CASE("panic is recorded and reported, run keeps partial metrics") {
  ScenarioConfig cfg = bench_scenario(Policy::ZRAM);
  cfg.device.zram_bytes = 0;
  cfg.device.nand_partition_bytes = 0;
  for (auto& s : cfg.workload.apps) {  // nothing is killable
    s.is_init = true;
    s.idle_band = OomBand::NATIVE;
  }

  Trace tr;
  tr.seed = cfg.seed;
  tr.events.push_back({0, EventKind::BOOT_LAUNCH, 0, 0});
  tr.events.push_back({5, EventKind::GROW, 0, static_cast<std::uint64_t>(
                                                 pages_for_util(cfg, 0.99) - 4 * 256)});
  tr.events.push_back({10, EventKind::GROW, 0, 4096});  // cannot fit
  auto log = replay(tr, cfg, Policy::ZRAM);
  CHECK(log.panicked);
  CHECK(log.panic_time >= 0);
  CHECK_FALSE(log.days.empty());
}

TEST_CASE("second-day session of a surviving app starts warm") {
  ScenarioConfig cfg = default_scenario(DeviceProfile::LOW_END, 21);
  cfg.workload.days = 2;
  auto tr = generate(cfg);
  REQUIRE(tr.ok());
  auto log = replay(tr.value, cfg, Policy::SWAM);
  REQUIRE(log.kills.empty());
  int warm = 0;
  for (const LaunchRecord& l : log.launches)
    if (!l.cold) {
      warm++;
      CHECK(l.cost_ms == Approx(cfg.estimators.warm_start_ms));
    }
  CHECK(warm == 15);  // every foreground session on day 2
}

TEST_CASE("the unmap unit knob changes the check count accounting") {
  ScenarioConfig cfg = bench_scenario(Policy::SWAM);
  Trace tr;
  tr.seed = cfg.seed;
  tr.events.push_back({0, EventKind::BOOT_LAUNCH, 0, 0});
  tr.events.push_back({10, EventKind::GROW, 0, static_cast<std::uint64_t>(
                                                  pages_for_util(cfg, 0.70) - 4 * 256)});
  Engine coarse(cfg, Policy::SWAM);
  Engine fine(cfg, Policy::SWAM);
  fine.set_unmap_unit(32 * 1024);  // runtime knob, between events
  for (const auto& ev : tr.events) {
    coarse.step(ev);
    fine.step(ev);
  }
  CHECK(coarse.metrics().swap_out_pages == fine.metrics().swap_out_pages);
  CHECK(fine.metrics().unmap_checks_total > coarse.metrics().unmap_checks_total);
}

TEST_CASE("killed apps ignore work until their next-day relaunch") {
  ScenarioConfig cfg = bench_scenario(Policy::ZRAM);
  Trace tr;
  tr.seed = cfg.seed;
  tr.events.push_back({0, EventKind::BOOT_LAUNCH, 0, 0});
  tr.events.push_back({0, EventKind::BOOT_LAUNCH, 1, 0});

  Engine e(cfg, Policy::ZRAM);
  for (const auto& ev : tr.events) e.step(ev);
  REQUIRE(kill(e.model(), 1, KillerKind::LMKD, 100).ok());

  std::int64_t owned = e.model().app(1).owned_pages();
  e.step({200, EventKind::ACCESS, 1, 42});
  e.step({201, EventKind::GROW, 1, 10});
  CHECK(e.metrics().accesses == 0);
  CHECK(e.model().app(1).owned_pages() == owned);

  e.step({day_ms + 1000, EventKind::DAY_RELAUNCH, 1, 0});
  CHECK(e.model().app(1).state == AppState::RUNNING);
  CHECK(e.model().app(1).relaunches == 1);
  CHECK(e.model().app(1).owned_pages() > 0);
  CHECK(e.metrics().cold_launches == 3);  // two boots plus the relaunch
}

TEST_CASE("escalation never kills when an earlier stage freed enough") {
  ScenarioConfig cfg = bench_scenario(Policy::ZRAM, 64);
  cfg.device.zram_bytes = mib(32);  // plenty of fast swap
  Trace tr;
  tr.seed = cfg.seed;
  tr.events.push_back({0, EventKind::BOOT_LAUNCH, 0, 0});
  tr.events.push_back({10, EventKind::GROW, 0, static_cast<std::uint64_t>(
                                                  pages_for_util(cfg, 0.85) - 4 * 256)});
  auto log = replay(tr, cfg, Policy::ZRAM);
  CHECK(log.swap_out_pages > 0);
  CHECK(log.kills.empty());  // swap alone brought utilization down
}
