#include "subdiv/attack.h"

#include <algorithm>
#include <deque>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "subdiv/error.h"

namespace subdiv {

namespace {

constexpr std::size_t kNone = SIZE_MAX;

struct Closure {
  std::vector<bool> reached;
  /// BFS parent; a root points to itself.
  std::vector<std::size_t> parent;
};

// BFS through exploitable SMs and devices. `can_enter` decides SM nodes.
template <typename CanEnter>
void spread(const SecurityGraph& m, Closure& st, std::deque<std::size_t>& queue,
            const CanEnter& can_enter) {
  const Graph& topo = m.topology();
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y : topo.neighbors(x)) {
      if (st.reached[y]) continue;
      const Asset& a = m.asset(y);
      if (a.kind == AssetKind::kControlCenter) continue;
      if (a.is_sm() && !can_enter(y)) continue;
      st.reached[y] = true;
      st.parent[y] = x;
      queue.push_back(y);
    }
  }
}

Closure closure(const ColoredNetwork& net, std::span<const std::size_t> entries,
                const ExploitSet& exploits, bool shared_vulnerability) {
  const SecurityGraph& m = net.m;
  Closure st{std::vector<bool>(m.size(), false), std::vector<std::size_t>(m.size(), kNone)};
  auto can_enter = [&](std::size_t node) {
    const ColorIndex c = net.color_of(node);
    return c != kUncolored && exploits.covers(c, net.palette);
  };

  std::deque<std::size_t> queue;
  for (std::size_t e : entries) {
    if (st.reached[e]) continue;
    if (m.asset(e).is_sm() && !can_enter(e)) continue;
    st.reached[e] = true;
    st.parent[e] = e;
    queue.push_back(e);
  }
  spread(m, st, queue, can_enter);

  if (!shared_vulnerability) return st;
  while (true) {
    std::set<ColorIndex> hit;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (st.reached[i] && m.asset(i).is_sm()) hit.insert(net.color_of(i));
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (st.reached[i] || !m.asset(i).is_sm() || !hit.count(net.color_of(i))) continue;
      st.reached[i] = true;
      st.parent[i] = i;
      queue.push_back(i);
    }
    if (queue.empty()) return st;
    spread(m, st, queue, can_enter);
  }
}

std::set<int> compromised_substations(const SecurityGraph& m, const Closure& st) {
  std::set<int> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Asset& a = m.asset(i);
    if (st.reached[i] && a.is_sm() && a.is_entry_point) out.insert(a.substation_id);
  }
  return out;
}

std::vector<std::size_t> path_to(const Closure& st, std::size_t node) {
  std::vector<std::size_t> path{node};
  while (st.parent[path.back()] != path.back()) path.push_back(st.parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

// Calls fn(subset) for every k-subset of `items`, in lexicographic order.
template <typename Fn>
void for_each_subset(const std::vector<ColorIndex>& items, std::size_t k, const Fn& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t n = items.size();
  if (k > n) return;
  while (true) {
    std::set<ColorIndex> subset;
    for (std::size_t i : idx) subset.insert(items[i]);
    if (fn(subset)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<ColorIndex> colors_in_use(const ColoredNetwork& net) {
  std::set<ColorIndex> used;
  for (std::size_t i = 0; i < net.m.size(); ++i) {
    const ColorIndex c = net.color_of(i);
    if (c != kUncolored) used.insert(c);
  }
  return {used.begin(), used.end()};
}

bool is_target_sm(const Asset& a, int target) {
  return a.is_sm() && a.substation_id == target;
}

}  // namespace

std::string_view to_string(AttackMode m) {
  return m == AttackMode::kCapability ? "capability" : "budget";
}

AttackScenario AttackScenario::from_json(std::string_view text) {
  AttackScenario s;
  try {
    const auto doc = nlohmann::json::parse(text);
    const std::string mode = doc.value("mode", std::string("capability"));
    if (mode == "capability") {
      s.mode = AttackMode::kCapability;
    } else if (mode == "budget") {
      s.mode = AttackMode::kBudget;
    } else {
      throw InputError("scenario: unknown mode '" + mode + "'");
    }
    s.k = doc.at("k").get<int>();
    s.entry_nodes = doc.value("entry_nodes", std::vector<std::string>{});
    for (int t : doc.value("target_substations", std::vector<int>{}))
      s.target_substations.insert(t);
    if (doc.contains("p_total_mw")) s.p_total_mw = doc["p_total_mw"].get<double>();
    if (doc.contains("pi")) {
      for (const auto& [name, value] : doc["pi"].items()) {
        auto type = sm_type_from_string(name);
        if (!type) throw InputError("scenario: unknown SM type '" + name + "' in pi");
        s.attack_likelihood.emplace_back(*type, value.get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("scenario: ") + e.what());
  }
  if (s.target_substations.empty() && s.entry_nodes.empty())
    throw InputError("scenario: needs target_substations or entry_nodes");
  return s;
}

ExploitSet ExploitSet::up_to_strength(int k) {
  ExploitSet e;
  e.max_strength_ = k;
  return e;
}

ExploitSet ExploitSet::of_colors(std::set<ColorIndex> colors) {
  ExploitSet e;
  e.colors_ = std::move(colors);
  return e;
}

bool ExploitSet::covers(ColorIndex color, const Palette& palette) const {
  if (max_strength_) return palette.strength(color) <= *max_strength_;
  return colors_.count(color) > 0;
}

ColorIndex ColoredNetwork::color_of(std::size_t node) const {
  auto v = g.vertex_of(node);
  if (!v) return kUncolored;
  return coloring.assignment.at(*v);
}

bool exploitable(Vertex sm, const Coloring& c, const Palette& palette,
                 const ExploitSet& exploits) {
  const ColorIndex color = c.assignment.at(sm);
  return color != kUncolored && exploits.covers(color, palette);
}

AttackResult propagate(const ColoredNetwork& net, const AttackScenario& scenario,
                       std::span<const SubstationProfile> profiles) {
  const SecurityGraph& m = net.m;
  if (net.coloring.assignment.size() != net.g.size() || !net.coloring.is_total())
    throw InputError("attack: coloring does not cover every SM");

  for (int t : scenario.target_substations) {
    if (!find_profile(profiles, t)) throw InputError(fmt::format("unknown substation {}", t));
    bool has_sm = false;
    for (const Asset& a : m.assets()) has_sm |= is_target_sm(a, t);
    if (!has_sm) throw InputError(fmt::format("substation {} has no security mechanism", t));
  }

  std::vector<std::size_t> entries;
  for (const auto& id : scenario.entry_nodes) {
    auto node = m.find(id);
    if (!node) throw InputError("unknown entry node " + id);
    entries.push_back(*node);
  }
  if (entries.empty()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Asset& a = m.asset(i);
      if (a.is_sm() && a.is_entry_point && scenario.target_substations.count(a.substation_id))
        entries.push_back(i);
    }
  }

  AttackResult result;
  Closure st;
  if (scenario.mode == AttackMode::kCapability) {
    st = closure(net, entries, ExploitSet::up_to_strength(scenario.k), false);
  } else {
    const auto used = colors_in_use(net);
    const std::size_t budget =
        std::min<std::size_t>(used.size(), static_cast<std::size_t>(std::max(0, scenario.k)));
    double best_lol = -1.0;
    std::size_t best_count = 0;
    for_each_subset(used, budget, [&](const std::set<ColorIndex>& colors) {
      Closure candidate = closure(net, entries, ExploitSet::of_colors(colors), true);
      const double lol = total_loss_of_load(compromised_substations(m, candidate), profiles);
      const auto count = static_cast<std::size_t>(
          std::count(candidate.reached.begin(), candidate.reached.end(), true));
      if (lol > best_lol || (lol == best_lol && count > best_count)) {
        best_lol = lol;
        best_count = count;
        st = std::move(candidate);
        result.exploited_colors = colors;
      }
      return false;
    });
  }

  for (std::size_t i = 0; i < m.size(); ++i)
    if (st.reached[i] && m.asset(i).is_sm()) result.compromised_sms.push_back(i);
  result.compromised_substations = compromised_substations(m, st);

  for (std::size_t i : result.compromised_sms) {
    const Asset& a = m.asset(i);
    if (!a.is_entry_point || !scenario.target_substations.count(a.substation_id)) continue;
    result.accessed_sms.push_back(i);
    auto path = path_to(st, i);
    for (std::size_t node : path) {
      const int sub = m.asset(node).substation_id;
      if (m.asset(node).is_sm() && !scenario.target_substations.count(sub) &&
          result.compromised_substations.count(sub))
        result.prerequisites.insert(sub);
    }
    result.attack_paths.push_back(std::move(path));
  }
  for (int sub : result.compromised_substations) {
    if (!scenario.target_substations.count(sub) && !result.prerequisites.count(sub))
      result.propagation.insert(sub);
  }
  result.total_p_lol_mw = total_loss_of_load(result.compromised_substations, profiles);
  return result;
}

PathEnumeration enumerate_attack_paths(const ColoredNetwork& net, std::size_t entry,
                                       int target_substation,
                                       std::optional<std::size_t> max_len,
                                       std::size_t path_cap) {
  const SecurityGraph& m = net.m;
  if (entry >= m.size()) throw InputError("attack paths: entry node out of range");
  const std::size_t limit = max_len.value_or(m.size());
  const Graph& topo = m.topology();

  PathEnumeration out;
  auto record = [&](const std::vector<std::size_t>& path) {
    std::set<ColorIndex> colors;
    for (std::size_t node : path) {
      const ColorIndex c = net.color_of(node);
      if (c != kUncolored) colors.insert(c);
    }
    out.paths.push_back({path, static_cast<int>(colors.size())});
  };

  std::vector<std::size_t> path{entry};
  if (is_target_sm(m.asset(entry), target_substation)) {
    record(path);
    return out;
  }
  std::vector<bool> on_path(m.size(), false);
  on_path[entry] = true;
  std::vector<std::size_t> cursor{0};
  while (!path.empty()) {
    const std::size_t x = path.back();
    const auto nbrs = topo.neighbors(x);
    if (cursor.back() == nbrs.size() || path.size() - 1 == limit) {
      on_path[x] = false;
      path.pop_back();
      cursor.pop_back();
      continue;
    }
    const std::size_t y = nbrs[cursor.back()++];
    if (on_path[y] || m.asset(y).kind == AssetKind::kControlCenter) continue;
    path.push_back(y);
    if (is_target_sm(m.asset(y), target_substation)) {
      record(path);
      path.pop_back();
      if (out.paths.size() >= path_cap) {
        out.truncated = true;
        return out;
      }
      continue;
    }
    on_path[y] = true;
    cursor.push_back(0);
  }
  return out;
}

std::optional<int> min_exploits_to_compromise(const ColoredNetwork& net, std::size_t entry,
                                              int target_substation) {
  const SecurityGraph& m = net.m;
  if (entry >= m.size()) throw InputError("min exploits: entry node out of range");

  auto reaches = [&](const std::set<ColorIndex>* allowed) {
    auto can_enter = [&](std::size_t node) {
      return !allowed || allowed->count(net.color_of(node)) > 0;
    };
    if (m.asset(entry).is_sm() && !can_enter(entry)) return false;
    Closure st{std::vector<bool>(m.size(), false), std::vector<std::size_t>(m.size(), kNone)};
    st.reached[entry] = true;
    st.parent[entry] = entry;
    std::deque<std::size_t> queue{entry};
    spread(m, st, queue, can_enter);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (st.reached[i] && is_target_sm(m.asset(i), target_substation)) return true;
    return false;
  };

  if (!reaches(nullptr)) return std::nullopt;
  const auto used = colors_in_use(net);
  for (std::size_t size = 1; size <= used.size(); ++size) {
    bool found = false;
    for_each_subset(used, size, [&](const std::set<ColorIndex>& colors) {
      found = reaches(&colors);
      return found;
    });
    if (found) return static_cast<int>(size);
  }
  return std::nullopt;
}

DiversityReport diversity_report(const DiversityGraph& g, const Coloring& c,
                                 const Palette& palette, std::span<const double> psi,
                                 std::size_t top_n) {
  DiversityReport report;
  std::set<ColorIndex> used(c.assignment.begin(), c.assignment.end());
  used.erase(kUncolored);
  report.colors_used = used.size();
  for (ColorIndex i : used) report.color_names.push_back(palette[i].name);

  std::map<ColorIndex, std::size_t> entry_count;
  std::size_t entries = 0;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!g.sm(v).is_entry_point) continue;
    ++entries;
    ++entry_count[c.assignment[v]];
  }
  std::vector<std::size_t> counts;
  for (const auto& [color, n] : entry_count) counts.push_back(n);
  std::sort(counts.rbegin(), counts.rend());
  std::size_t covered = 0;
  for (std::size_t b = 1; b <= report.colors_used; ++b) {
    if (b <= counts.size()) covered += counts[b - 1];
    report.compromised_fraction.push_back(
        entries == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(entries));
  }

  const auto u = payoffs(c, psi, g.graph(), palette);
  const auto norm = normalize(u);
  report.sigma = std::accumulate(u.begin(), u.end(), 0.0);
  std::vector<Vertex> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&u](Vertex a, Vertex b) { return u[a] > u[b]; });
  for (std::size_t i = 0; i < std::min(top_n, order.size()); ++i) {
    const Vertex v = order[i];
    report.top.push_back({v, g.sm(v).id, g.sm(v).substation_id, u[v], norm[v]});
  }
  return report;
}

}  // namespace subdiv
