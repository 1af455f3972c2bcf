#include "subdiv/synthetic.h"

#include <algorithm>
#include <set>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "subdiv/coloring.h"
#include "subdiv/error.h"
#include "subdiv/grid_model.h"
#include "subdiv/impact.h"
#include "subdiv/random.h"
#include "subdiv/security_graph.h"

namespace subdiv {

std::map<std::string, std::string> synthetic_bundle(const SyntheticOptions& opt) {
  if (opt.buses < 2 || opt.substations < 1 || opt.substations > opt.buses)
    throw InputError("synthetic: need 1 <= substations <= buses and buses >= 2");
  if (2 * opt.substations < opt.buses)
    throw InputError("synthetic: at most two buses per substation");
  Rng rng(opt.seed);
  const int n = opt.buses;

  BusSystem sys;
  sys.title = fmt::format("SYNTHETIC {} BUS SYSTEM seed {}", n, opt.seed);
  for (int i = 1; i <= n; ++i) {
    const double load = rng.unit() < 0.8 ? std::round(5.0 + 95.0 * rng.unit()) : 0.0;
    sys.buses.push_back({i, load, fmt::format("Bus {}", i)});
  }

  // Spanning tree with bounded degree, then local chords.
  std::vector<int> degree(n + 1, 0);
  std::set<std::pair<int, int>> edges;
  auto add = [&](int a, int b) {
    if (a == b) return false;
    auto key = std::minmax(a, b);
    if (edges.count(key)) return false;
    edges.insert(key);
    ++degree[a];
    ++degree[b];
    sys.branches.push_back({key.first, key.second});
    return true;
  };
  for (int i = 2; i <= n; ++i) {
    int j;
    do {
      j = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(i - 1)));
    } while (degree[j] >= 4);
    add(j, i);
  }
  const int chords = n / 2;
  for (int added = 0, tries = 0; added < chords && tries < 100 * n; ++tries) {
    const int a = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(n)));
    const int b = a + 2 + static_cast<int>(rng.index(8));
    if (b > n || degree[a] >= 5 || degree[b] >= 5) continue;
    if (add(a, b)) ++added;
  }
  sys.total_load_mw = sys.bus_load_sum();

  // Merge buses joined by a branch into two-bus substations.
  std::vector<int> owner(n + 1, 0);
  std::vector<std::pair<int, int>> pool(sys.branches.size());
  std::transform(sys.branches.begin(), sys.branches.end(), pool.begin(),
                 [](const Branch& b) { return std::make_pair(b.from_bus, b.to_bus); });
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.index(i)]);
  std::vector<std::vector<int>> groups;
  int merges = n - opt.substations;
  std::vector<bool> merged(n + 1, false);
  for (const auto& [a, b] : pool) {
    if (merges == 0) break;
    if (merged[a] || merged[b]) continue;
    merged[a] = merged[b] = true;
    groups.push_back({a, b});
    --merges;
  }
  if (merges > 0) throw InputError("synthetic: could not form enough two-bus substations");
  for (int i = 1; i <= n; ++i)
    if (!merged[i]) groups.push_back({i});
  std::sort(groups.begin(), groups.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  std::map<int, std::vector<int>> entries;
  for (std::size_t s = 0; s < groups.size(); ++s) entries[static_cast<int>(s) + 1] = groups[s];
  const SubstationMap map(entries);

  std::string impact = "substation_id,p_lol_mw,l_star\n";
  int target = 1;
  double best_gamma = -1.0;
  for (const auto& [sub, buses] : map.entries()) {
    const double lol = map.load_of(sub, sys);
    const double l_star =
        rng.unit() < 0.05 ? 1.0 : std::round((1.05 + 2.05 * rng.unit()) * 1000.0) / 1000.0;
    impact += fmt::format("{},{},{}\n", sub, lol, l_star);
    const double gamma = impact_factor(lol, sys.total_load_mw, l_star);
    if (gamma > best_gamma) {
      best_gamma = gamma;
      target = sub;
    }
  }

  nlohmann::json submap;
  for (const auto& [sub, buses] : map.entries()) submap[std::to_string(sub)] = buses;

  static const char* kNames[] = {"Green", "Blue", "Red", "Purple", "Yellow",
                                 "Orange", "Cyan", "Brown", "Pink", "Gray"};
  std::vector<Color> colors;
  for (int i = 0; i < opt.palette_size; ++i) {
    const std::string name = i < 10 ? kNames[i] : fmt::format("Color{}", i + 1);
    colors.push_back({name, opt.palette_size - i});
  }

  nlohmann::json scenario = {{"mode", "capability"},
                             {"k", 8},
                             {"target_substations", {target}},
                             {"p_total_mw", sys.total_load_mw}};

  return {{"system.cdf", write_cdf(sys)},
          {"submap.json", submap.dump(2) + "\n"},
          {"impact.csv", impact},
          {"template.json", TemplateConfig::defaults().to_json()},
          {"palette.json", Palette(colors).to_json()},
          {"scenario.json", scenario.dump(2) + "\n"}};
}

}  // namespace subdiv
