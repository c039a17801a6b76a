#pragma once

#include <cstddef>
#include <vector>

#include "swamsim/types.hpp"

namespace swamsim {

/// One lazily-bound symbol: lookup time and relocation time, both ms.
struct Symbol {
  double ts_ms = 0.0;
  double tr_ms = 0.0;
};

/// Shared-object launch profile of an app, captured at first launch.
struct SoProfile {
  std::vector<Symbol> symbols;
  double tl_ms = 0.0;  // load time of the SO file(s)
  bool shared = false;
};

/// XML-UI conversion profile: layout interpretation plus GPU render.
struct XmlProfile {
  double layout_alter_ms = 0.0;
  double render_ms = 0.0;
};

struct EstimatorConfig {
  double base_restart_ms = 200.0;
  double so_weight = 1.0;
  double xml_weight = 1.0;
  double warm_start_ms = 50.0;  // resuming an app that is still resident
};

/// Total symbol lookup latency: sum of per-symbol lookup + relocation,
/// plus the SO file load time.
inline double estimate_so_cost(const SoProfile& p) {
  double t = 0.0;
  for (const Symbol& s : p.symbols) t += s.ts_ms + s.tr_ms;
  return t + p.tl_ms;
}

inline double estimate_xml_cost(const XmlProfile& p) {
  return p.layout_alter_ms + p.render_ms;
}

/// Cold relaunch cost hint for the EOOM killer and launch-time metrics.
inline double relaunch_cost(const SoProfile& so, const XmlProfile& xml,
                            const EstimatorConfig& cfg) {
  return cfg.so_weight * estimate_so_cost(so) +
         cfg.xml_weight * estimate_xml_cost(xml) + cfg.base_restart_ms;
}

/// Per-page share of rebuilding PLT/GOT entries after an SO page was
/// reclaimed (not swapped): charged on the reload fault.
inline double so_rebuild_share_ms(const SoProfile& so, std::size_t initial_so_pages) {
  if (initial_so_pages == 0) return 0.0;
  return estimate_so_cost(so) / static_cast<double>(initial_so_pages);
}

}  // namespace swamsim
