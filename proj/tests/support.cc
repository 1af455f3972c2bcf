#include "support.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "subdiv/grid_model.h"
#include "subdiv/text.h"

namespace subdiv::testing {

std::string data_path(const std::string& name) {
  return std::string(SUBDIV_DATA_DIR_FOR_TESTS) + "/" + name;
}

Graph random_graph(std::size_t n, double p, Rng& rng) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.unit() < p) g.add_edge(u, v);
  return g;
}

Graph path_graph(std::size_t n) {
  Graph g(n);
  for (Vertex v = 1; v < n; ++v) g.add_edge(v - 1, v);
  return g;
}

Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph star_graph(std::size_t leaves) {
  Graph g(leaves + 1);
  for (Vertex v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

bool connected(const Graph& g) {
  if (g.size() == 0) return true;
  std::vector<bool> seen(g.size(), false);
  std::vector<Vertex> stack = {0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == g.size();
}

std::vector<Graph> connected_graphs(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    Graph g(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (mask >> i & 1) g.add_edge(pairs[i].first, pairs[i].second);
    if (connected(g)) out.push_back(std::move(g));
  }
  return out;
}

std::size_t delta2_by_scan(const Graph& g) {
  std::size_t best = 0;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = 0; v < g.size(); ++v) {
      if (u == v || !g.adjacent(u, v)) continue;
      const std::size_t du = g.degree(u), dv = g.degree(v);
      if (du <= dv) best = std::max(best, du);
    }
  return best;
}

Ieee14 load_ieee14(double p_total) {
  Ieee14 b;
  b.p_total = p_total;
  const BusSystem sys = parse_cdf(text::read_file(data_path("ieee14/system.cdf")));
  const SubstationMap map = load_substation_map(text::read_file(data_path("ieee14/submap.json")));
  b.profiles = classify(load_impact_csv(text::read_file(data_path("ieee14/impact.csv")), p_total),
                        {0.25, p_total});
  b.m = build_security_graph(b.profiles, substation_adjacency(sys, map), TemplateConfig::defaults());
  b.g = extract_diversity_graph(b.m);
  b.palette = Palette::from_json(text::read_file(data_path("ieee14/palette.json")));
  const SmCatalog catalog;
  b.psi = vulnerability_table(b.g, b.profiles, catalog);
  b.order = order_players(b.g, b.profiles, catalog);
  return b;
}

double direct_payoff(const Graph& g, Vertex v, const std::vector<int>& strength,
                     const std::vector<double>& psi) {
  double u = 0.0;
  for (Vertex w = 0; w < g.size(); ++w)
    if (g.adjacent(v, w)) u += std::abs(strength[v] * psi[v] - strength[w] * psi[w]);
  return u;
}

bool proper(const Graph& g, const std::vector<int>& color) {
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex w = u + 1; w < g.size(); ++w)
      if (g.adjacent(u, w) && color[u] == color[w]) return false;
  return true;
}

bool is_equilibrium(const Graph& g, const std::vector<int>& color, const std::vector<int>& strengths,
                    const std::vector<double>& psi) {
  std::vector<int> trial = color;
  auto utility = [&](Vertex v) {
    int clashes = 0;
    std::vector<int> s(g.size());
    for (Vertex w = 0; w < g.size(); ++w) {
      s[w] = strengths[static_cast<std::size_t>(trial[w])];
      if (w != v && g.adjacent(v, w) && trial[w] == trial[v]) ++clashes;
    }
    return std::make_pair(clashes, direct_payoff(g, v, s, psi));
  };
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto [c0, u0] = utility(v);
    for (int c = 0; c < static_cast<int>(strengths.size()); ++c) {
      if (c == color[v]) continue;
      trial[v] = c;
      const auto [c1, u1] = utility(v);
      trial[v] = color[v];
      if (c1 < c0) return false;
      if (c1 == c0 && u1 > u0 + 1e-9 * std::max(1.0, std::abs(u0))) return false;
    }
  }
  return true;
}

}  // namespace subdiv::testing
