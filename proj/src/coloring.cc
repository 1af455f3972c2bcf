#include "subdiv/coloring.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "subdiv/error.h"

namespace subdiv {

namespace {

// Strictly greater beyond floating noise.
bool better(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return a > b + 1e-12 * scale;
}

double edge_term(double sv, double psi_v, double sw, double psi_w) {
  return std::abs(sv * psi_v - sw * psi_w);
}

// Payoff of v holding `color` against its currently colored neighbors.
double payoff_with(Vertex v, ColorIndex color, const std::vector<ColorIndex>& assignment,
                   std::span<const double> psi, const Graph& g, const Palette& palette) {
  const double sv = palette.strength(color);
  double total = 0.0;
  for (Vertex w : g.neighbors(v)) {
    const ColorIndex cw = assignment[w];
    if (cw == kUncolored) continue;
    total += edge_term(sv, psi[v], palette.strength(cw), psi[w]);
  }
  return total;
}

std::vector<bool> neighbor_colors(Vertex v, const std::vector<ColorIndex>& assignment,
                                  const Graph& g, std::size_t palette_size) {
  std::vector<bool> used(palette_size, false);
  for (Vertex w : g.neighbors(v))
    if (assignment[w] != kUncolored) used[static_cast<std::size_t>(assignment[w])] = true;
  return used;
}

struct Response {
  ColorIndex color = kUncolored;
  double payoff = 0.0;
  bool conflict_free = false;
};

// Best color for v against colored neighbors. Conflict-free colors take
// precedence; among equal payoffs the stronger color (lower index) wins.
Response best_response(Vertex v, const std::vector<ColorIndex>& assignment,
                       std::span<const double> psi, const Graph& g, const Palette& palette) {
  const auto used = neighbor_colors(v, assignment, g, palette.size());
  const bool any_free = std::find(used.begin(), used.end(), false) != used.end();
  Response best;
  for (std::size_t i = 0; i < palette.size(); ++i) {
    if (any_free && used[i]) continue;
    const auto color = static_cast<ColorIndex>(i);
    const double u = payoff_with(v, color, assignment, psi, g, palette);
    if (best.color == kUncolored || better(u, best.payoff)) best = {color, u, any_free};
  }
  return best;
}

bool satisfied(Vertex v, const std::vector<ColorIndex>& assignment, const Graph& g) {
  for (Vertex w : g.neighbors(v))
    if (assignment[w] == assignment[v]) return false;
  return true;
}

void check_psi(const Graph& g, std::span<const double> psi) {
  if (psi.size() != g.size()) {
    throw InputError(fmt::format("vulnerability table has {} entries for {} vertices",
                                 psi.size(), g.size()));
  }
}

void check_total(const Graph& g, const Coloring& c) {
  if (c.assignment.size() != g.size() || !c.is_total())
    throw InputError("coloring does not cover every vertex");
}

}  // namespace

Palette::Palette(std::vector<Color> colors) : colors_(std::move(colors)) {
  if (colors_.empty()) throw InputError("palette is empty");
  std::set<int> strengths;
  std::set<std::string> names;
  for (const Color& c : colors_) {
    if (c.strength < 1)
      throw InputError(fmt::format("color {} has strength {} < 1", c.name, c.strength));
    if (!strengths.insert(c.strength).second)
      throw InputError(fmt::format("duplicate strength {} in palette", c.strength));
    if (!names.insert(c.name).second) throw InputError("duplicate color name " + c.name);
  }
  std::sort(colors_.begin(), colors_.end(),
            [](const Color& a, const Color& b) { return a.strength > b.strength; });
}

Palette Palette::case_study() {
  return Palette({{"Green", 10}, {"Blue", 8}, {"Red", 6}, {"Purple", 4}, {"Yellow", 2}});
}

Palette Palette::ranked(std::size_t n) {
  std::vector<Color> colors;
  for (std::size_t i = 0; i < n; ++i)
    colors.push_back({fmt::format("c{}", i + 1), static_cast<int>(n - i)});
  return Palette(std::move(colors));
}

Palette Palette::from_json(std::string_view text) {
  std::vector<Color> colors;
  try {
    for (const auto& item : nlohmann::json::parse(text)) {
      colors.push_back({item.at("name").get<std::string>(), item.at("strength").get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("palette: ") + e.what());
  }
  return Palette(std::move(colors));
}

std::string Palette::to_json() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const Color& c : colors_) doc.push_back({{"name", c.name}, {"strength", c.strength}});
  return doc.dump(2) + "\n";
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kGame: return "game";
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kSequential: return "sequential";
    case Algorithm::kRandomized: return "random";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_string(std::string_view s) {
  for (Algorithm a : {Algorithm::kGame, Algorithm::kGreedy, Algorithm::kSequential,
                      Algorithm::kRandomized})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

bool is_stochastic(Algorithm a) {
  return a == Algorithm::kSequential || a == Algorithm::kRandomized;
}

bool Coloring::is_total() const {
  return std::none_of(assignment.begin(), assignment.end(),
                      [](ColorIndex c) { return c == kUncolored; });
}

std::size_t Coloring::colors_used() const {
  std::set<ColorIndex> used(assignment.begin(), assignment.end());
  used.erase(kUncolored);
  return used.size();
}

std::vector<std::pair<Vertex, Vertex>> conflicts(const Graph& g, const Coloring& c) {
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v : g.neighbors(u))
      if (u < v && c.assignment[u] != kUncolored && c.assignment[u] == c.assignment[v])
        out.emplace_back(u, v);
  return out;
}

bool is_proper(const Graph& g, const Coloring& c) {
  return c.assignment.size() == g.size() && c.is_total() && conflicts(g, c).empty();
}

double vulnerability(const Asset& sm, double gamma, const SmCatalog& catalog) {
  if (!sm.is_sm()) throw InputError(sm.id + " is not a security mechanism");
  return catalog.likelihood(*sm.sm_type) * gamma;
}

std::vector<double> vulnerability_table(const DiversityGraph& g,
                                        std::span<const SubstationProfile> profiles,
                                        const SmCatalog& catalog) {
  std::vector<double> psi;
  psi.reserve(g.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    const SubstationProfile* p = find_profile(profiles, g.sm(v).substation_id);
    if (!p) {
      throw InputError(fmt::format("no impact profile for substation {} of {}",
                                   g.sm(v).substation_id, g.sm(v).id));
    }
    psi.push_back(vulnerability(g.sm(v), p->gamma, catalog));
  }
  return psi;
}

double payoff(Vertex v, const Coloring& c, std::span<const double> psi, const Graph& g,
              const Palette& palette) {
  check_psi(g, psi);
  if (c.assignment.at(v) == kUncolored)
    throw InputError(fmt::format("vertex {} is uncolored", v));
  for (Vertex w : g.neighbors(v)) {
    if (c.assignment[w] == kUncolored)
      throw InputError(fmt::format("neighbor {} of vertex {} is uncolored", w, v));
  }
  return payoff_with(v, c.assignment[v], c.assignment, psi, g, palette);
}

std::vector<double> payoffs(const Coloring& c, std::span<const double> psi, const Graph& g,
                            const Palette& palette) {
  std::vector<double> out(g.size());
  for (Vertex v = 0; v < g.size(); ++v) out[v] = payoff(v, c, psi, g, palette);
  return out;
}

std::vector<double> normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = 10.0 * (values[i] - *lo) / range;
  return out;
}

double cumulative_index(const Coloring& c, std::span<const double> psi, const Graph& g,
                        const Palette& palette) {
  double sigma = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) sigma += payoff(v, c, psi, g, palette);
  return sigma;
}

Coloring color_randomized(const Graph& g, const Palette& palette, std::uint64_t seed,
                          const RandomizedOptions& options) {
  const std::size_t n = g.size();
  const std::size_t cap =
      options.round_cap.value_or(100 * std::max<std::size_t>(1, std::bit_width(n)));
  Rng rng(seed);

  PaletteFactory factory = options.factory;
  if (!factory) {
    factory = [&palette](Vertex, std::size_t degree, Rng& r) {
      std::vector<ColorIndex> all(palette.size());
      std::iota(all.begin(), all.end(), 0);
      const std::size_t k = std::min(degree + 1, all.size());
      for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + r.index(all.size() - i)]);
      all.resize(k);
      return all;
    };
  }

  std::vector<std::vector<ColorIndex>> lists(n);
  for (Vertex v = 0; v < n; ++v) lists[v] = factory(v, g.degree(v), rng);

  Coloring out{std::vector<ColorIndex>(n, kUncolored), Algorithm::kRandomized, 0, seed};
  std::vector<bool> active(n, true);
  std::vector<ColorIndex> pick(n, kUncolored);
  std::size_t remaining = n;
  std::size_t round = 0;
  while (remaining > 0) {
    if (round == cap)
      throw AlgorithmError(fmt::format("randomized coloring hit its round cap ({})", cap));
    ++round;
    for (Vertex v = 0; v < n; ++v) {
      if (!active[v]) continue;
      if (lists[v].empty())
        throw AlgorithmError(fmt::format("vertex {} ran out of candidate colors", v));
      pick[v] = lists[v][rng.index(lists[v].size())];
    }
    std::vector<Vertex> halted;
    for (Vertex v = 0; v < n; ++v) {
      if (!active[v]) continue;
      bool clash = false;
      for (Vertex w : g.neighbors(v)) {
        const ColorIndex other = active[w] ? pick[w] : out.assignment[w];
        if (other == pick[v]) {
          clash = true;
          break;
        }
      }
      if (!clash) halted.push_back(v);
    }
    for (Vertex v : halted) {
      out.assignment[v] = pick[v];
      active[v] = false;
    }
    remaining -= halted.size();
    for (Vertex v : halted) {
      for (Vertex w : g.neighbors(v)) {
        if (!active[w]) continue;
        auto& list = lists[w];
        list.erase(std::remove(list.begin(), list.end(), out.assignment[v]), list.end());
      }
    }
  }
  out.rounds_used = round;
  return out;
}

Coloring color_greedy(const Graph& g, const Palette& palette) {
  std::vector<Vertex> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&g](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });

  Coloring out{std::vector<ColorIndex>(g.size(), kUncolored), Algorithm::kGreedy, 1, 0};
  for (Vertex v : order) {
    const auto used = neighbor_colors(v, out.assignment, g, palette.size());
    auto free = std::find(used.begin(), used.end(), false);
    if (free == used.end()) {
      throw PaletteExhausted(fmt::format(
          "greedy: no color left for vertex {} (degree {}, palette {})", v, g.degree(v),
          palette.size()));
    }
    out.assignment[v] = static_cast<ColorIndex>(free - used.begin());
  }
  return out;
}

Coloring color_sequential(const Graph& g, const Palette& palette,
                          std::span<const int> substation_of, std::uint64_t seed) {
  if (substation_of.size() != g.size())
    throw InputError("sequential: substation order does not cover every vertex");
  std::vector<Vertex> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return substation_of[a] < substation_of[b];
  });

  Rng rng(seed);
  Coloring out{std::vector<ColorIndex>(g.size(), kUncolored), Algorithm::kSequential, 0, seed};
  for (Vertex v : order) {
    const auto used = neighbor_colors(v, out.assignment, g, palette.size());
    if (std::find(used.begin(), used.end(), false) == used.end()) {
      throw PaletteExhausted(fmt::format(
          "sequential: every color is taken around vertex {} (palette {})", v,
          palette.size()));
    }
    ColorIndex c;
    do {
      c = static_cast<ColorIndex>(rng.index(palette.size()));
      ++out.rounds_used;
    } while (used[static_cast<std::size_t>(c)]);
    out.assignment[v] = c;
  }
  return out;
}

std::vector<Vertex> order_players(const DiversityGraph& g,
                                  std::span<const SubstationProfile> profiles,
                                  const SmCatalog& catalog) {
  struct Key {
    int rank;
    double gamma;
    std::size_t degree;
  };
  std::vector<Key> keys;
  for (Vertex v = 0; v < g.size(); ++v) {
    const SubstationProfile* p = find_profile(profiles, g.sm(v).substation_id);
    if (!p) {
      throw InputError(fmt::format("no impact profile for substation {}",
                                   g.sm(v).substation_id));
    }
    keys.push_back({catalog.rank(*g.sm(v).sm_type), p->gamma, g.degree(v)});
  }
  std::vector<Vertex> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&keys](Vertex a, Vertex b) {
    const Key& x = keys[a];
    const Key& y = keys[b];
    if (x.rank != y.rank) return x.rank < y.rank;
    if (x.gamma != y.gamma) return x.gamma > y.gamma;
    if (x.degree != y.degree) return x.degree > y.degree;
    return a < b;
  });
  return order;
}

NashCertificate verify_nash(const Graph& g, const Coloring& c, std::span<const double> psi,
                            const Palette& palette) {
  check_psi(g, psi);
  check_total(g, c);
  NashCertificate cert;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!satisfied(v, c.assignment, g)) {
      cert.violations.push_back({v, c.assignment[v], NashViolation::Kind::kConflict, 0.0});
      continue;
    }
    const auto used = neighbor_colors(v, c.assignment, g, palette.size());
    const double current = payoff_with(v, c.assignment[v], c.assignment, psi, g, palette);
    for (std::size_t i = 0; i < palette.size(); ++i) {
      const auto color = static_cast<ColorIndex>(i);
      if (used[i] || color == c.assignment[v]) continue;
      const double alt = payoff_with(v, color, c.assignment, psi, g, palette);
      if (better(alt, current))
        cert.violations.push_back({v, color, NashViolation::Kind::kImprovement, alt - current});
    }
  }
  cert.is_nash = cert.violations.empty();
  return cert;
}

GameResult color_game(const Graph& g, const Palette& palette, std::span<const double> psi,
                      std::span<const Vertex> order, const GameOptions& options) {
  check_psi(g, psi);
  const std::size_t n = g.size();
  {
    std::vector<bool> seen(n, false);
    for (Vertex v : order) {
      if (v >= n || seen[v]) throw InputError("player order is not a permutation");
      seen[v] = true;
    }
    if (order.size() != n) throw InputError("player order is not a permutation");
  }
  const std::size_t cap = options.move_cap.value_or(50 * n);

  GameResult result;
  auto& assignment = result.coloring.assignment;
  assignment.assign(n, kUncolored);
  result.coloring.algorithm = Algorithm::kGame;

  for (Vertex v : order) assignment[v] = best_response(v, assignment, psi, g, palette).color;

  double sigma = 0.0;
  for (Vertex v = 0; v < n; ++v)
    sigma += payoff_with(v, assignment[v], assignment, psi, g, palette);
  result.potential_trace.push_back(sigma);

  // Zobrist hashing of profiles for cycle detection.
  Rng keys_rng(0x5eedc0105ULL);
  std::vector<std::uint64_t> keys(n * palette.size());
  for (auto& k : keys) k = keys_rng.next();
  auto key = [&](Vertex v, ColorIndex c) {
    return keys[v * palette.size() + static_cast<std::size_t>(c)];
  };
  std::uint64_t hash = 0;
  for (Vertex v = 0; v < n; ++v) hash ^= key(v, assignment[v]);
  std::unordered_set<std::uint64_t> visited{hash};

  bool stable = false;
  bool stopped = false;
  std::size_t rounds = 0;
  while (!stable && !stopped) {
    ++rounds;
    stable = true;
    for (Vertex v : order) {
      const Response br = best_response(v, assignment, psi, g, palette);
      if (br.color == assignment[v]) continue;
      const double current = payoff_with(v, assignment[v], assignment, psi, g, palette);
      const bool fixes_conflict = br.conflict_free && !satisfied(v, assignment, g);
      if (!fixes_conflict && !better(br.payoff, current)) continue;

      if (result.moves == cap) {
        stopped = true;
        break;
      }
      hash ^= key(v, assignment[v]) ^ key(v, br.color);
      assignment[v] = br.color;
      ++result.moves;
      stable = false;
      // Each edge term counts once in U^v and once in U^w.
      sigma += 2.0 * (br.payoff - current);
      result.potential_trace.push_back(sigma);
      if (!visited.insert(hash).second) {
        result.cycle_detected = true;
        stopped = true;
        break;
      }
    }
  }

  result.coloring.rounds_used = rounds;
  result.certificate = verify_nash(g, result.coloring, psi, palette);
  result.converged = stable && result.certificate.is_nash;
  return result;
}

}  // namespace subdiv
