#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace subdiv {

struct SyntheticOptions {
  int buses = 118;
  int substations = 100;
  int palette_size = 10;
  std::uint64_t seed = 118;
};

/// Files of a randomly generated, connected bus system with multi-bus
/// substations, impact data, the default template, a ranked palette and a
/// k=8 capability scenario aimed at the highest-gamma substation.
/// Keys are file names (system.cdf, submap.json, impact.csv, template.json,
/// palette.json, scenario.json).
std::map<std::string, std::string> synthetic_bundle(const SyntheticOptions& options);

}  // namespace subdiv
