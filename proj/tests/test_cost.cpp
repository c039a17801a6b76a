#include <catch2/catch.hpp>

#include "swamsim/cost.hpp"
#include "swamsim/rng.hpp"
#include "swamsim/workload.hpp"

using namespace swamsim;

namespace {

// Independent straight-line oracle for the lookup-latency formula.
double so_cost_oracle(const SoProfile& p) {
  double total = p.tl_ms;
  for (std::size_t i = 0; i < p.symbols.size(); ++i) {
    total += p.symbols[i].ts_ms;
    total += p.symbols[i].tr_ms;
  }
  return total;
}

SoProfile random_profile(Rng& rng) {
  SoProfile p;
  std::size_t n = rng.below(64);
  for (std::size_t i = 0; i < n; ++i)
    p.symbols.push_back({rng.uniform(0.0, 2.0), rng.uniform(0.0, 1.0)});
  p.tl_ms = rng.uniform(0.0, 100.0);
  return p;
}

}  // namespace

TEST_CASE("so cost: empty symbol list is just the load time") {
  SoProfile p;
  p.tl_ms = 5.0;
  CHECK(estimate_so_cost(p) == 5.0);
}

TEST_CASE("so cost: single symbol") {
  SoProfile p;
  p.symbols.push_back({2.0, 1.0});
  p.tl_ms = 5.0;
  CHECK(estimate_so_cost(p) == 8.0);
}

TEST_CASE("so cost matches straight-line oracle on random profiles") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    SoProfile p = random_profile(rng);
    CHECK(estimate_so_cost(p) == Approx(so_cost_oracle(p)).epsilon(1e-12));
  }
}

TEST_CASE("so cost is linear in the profile") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    SoProfile p = random_profile(rng);
    SoProfile doubled = p;
    for (Symbol& s : doubled.symbols) {
      s.ts_ms *= 2.0;
      s.tr_ms *= 2.0;
    }
    doubled.tl_ms *= 2.0;
    CHECK(estimate_so_cost(doubled) == Approx(2.0 * estimate_so_cost(p)).epsilon(1e-9));
  }
}

TEST_CASE("adding a symbol never decreases the cost") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    SoProfile p = random_profile(rng);
    double before = estimate_so_cost(p);
    p.symbols.push_back({rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)});
    CHECK(estimate_so_cost(p) >= before);
  }
}

TEST_CASE("xml cost") {
  CHECK(estimate_xml_cost({0.0, 0.0}) == 0.0);
  CHECK(estimate_xml_cost({3.0, 22.0}) == 25.0);
}

TEST_CASE("synthesized profiles carry the measured phase splits") {
  AppSpec spec;
  spec.name = "x";
  spec.n_symbols = 4000;
  spec.symbol_ts_mean_ms = 0.05;
  spec.tl_ms = 30.0;
  spec.xml_total_ms = 300.0;
  App app = make_app(spec, EstimatorConfig{}, Rng(123));

  double ts_sum = 0.0, tr_sum = 0.0;
  for (const Symbol& s : app.so_profile.symbols) {
    ts_sum += s.ts_ms;
    tr_sum += s.tr_ms;
  }
  // Lookup vs relocation work split 65/35.
  CHECK(ts_sum / (ts_sum + tr_sum) == Approx(0.65).margin(0.001));
  // Layout interpretation vs render split 12/88.
  CHECK(app.xml_profile.layout_alter_ms / estimate_xml_cost(app.xml_profile) ==
        Approx(0.12).margin(0.001));
}

TEST_CASE("relaunch cost composition") {
  EstimatorConfig cfg;
  cfg.base_restart_ms = 10.0;
  CHECK(relaunch_cost(SoProfile{}, XmlProfile{}, cfg) == 10.0);

  SoProfile so;
  so.symbols.push_back({2.0, 1.0});
  so.tl_ms = 5.0;  // -> 8
  XmlProfile xml{3.0, 22.0};  // -> 25
  CHECK(relaunch_cost(so, xml, cfg) == Approx(43.0));
}

TEST_CASE("reference roster ranks game apps costliest and Twitter cheapest") {
  ScenarioConfig cfg = default_scenario(DeviceProfile::LOW_END, 42);
  Rng profile_rng = Rng(cfg.seed).fork(1000);
  double cookie = 0.0, twitter = 0.0, fg_min = 1e18, fg_max = 0.0;
  for (std::size_t i = 0; i < cfg.workload.apps.size(); ++i) {
    const AppSpec& s = cfg.workload.apps[i];
    App a = make_app(s, cfg.estimators, profile_rng.fork(i));
    if (s.name == "CookieRun") cookie = a.relaunch_cost_ms;
    if (s.name == "Twitter") twitter = a.relaunch_cost_ms;
    if (s.role == Role::FOREGROUND) {
      fg_min = std::min(fg_min, a.relaunch_cost_ms);
      fg_max = std::max(fg_max, a.relaunch_cost_ms);
    }
  }
  CHECK(cookie == fg_max);
  CHECK(twitter == fg_min);
  CHECK(cookie > 2.0 * twitter);
}
