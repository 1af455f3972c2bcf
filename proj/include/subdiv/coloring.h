#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subdiv/graph.h"
#include "subdiv/impact.h"
#include "subdiv/random.h"
#include "subdiv/security_graph.h"

namespace subdiv {

/// Index into a Palette.
using ColorIndex = int;
inline constexpr ColorIndex kUncolored = -1;

struct Color {
  std::string name;
  /// Security strength; higher is more secure.
  int strength = 0;

  bool operator==(const Color&) const = default;
};

/// Software packages available for allocation, kept strongest first.
/// Strengths are distinct positive integers, usually on a 1-10 scale;
/// palettes for dense graphs may go beyond it.
class Palette {
 public:
  /// Throws InputError on an empty list, duplicate names or strengths, or a
  /// strength below 1.
  explicit Palette(std::vector<Color> colors);

  /// Green 10, Blue 8, Red 6, Purple 4, Yellow 2.
  static Palette case_study();
  /// n colors "c1".."cn" with strengths n..1.
  static Palette ranked(std::size_t n);
  /// JSON list of {name, strength}.
  static Palette from_json(std::string_view text);
  std::string to_json() const;

  std::size_t size() const noexcept { return colors_.size(); }
  const Color& operator[](ColorIndex i) const { return colors_.at(static_cast<std::size_t>(i)); }
  int strength(ColorIndex i) const { return (*this)[i].strength; }
  std::span<const Color> colors() const { return colors_; }

 private:
  std::vector<Color> colors_;
};

enum class Algorithm { kGame, kGreedy, kSequential, kRandomized };

/// "game", "greedy", "sequential", "random".
std::string_view to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(std::string_view s);
bool is_stochastic(Algorithm a);

struct Coloring {
  std::vector<ColorIndex> assignment;
  Algorithm algorithm = Algorithm::kGreedy;
  /// Rounds for randomized and the game, color draws for sequential,
  /// 1 for greedy.
  std::size_t rounds_used = 0;
  std::uint64_t seed = 0;

  bool is_total() const;
  std::size_t colors_used() const;
  int strength_of(Vertex v, const Palette& p) const { return p.strength(assignment.at(v)); }

  bool operator==(const Coloring&) const = default;
};

/// Edges whose endpoints share a color (u < v).
std::vector<std::pair<Vertex, Vertex>> conflicts(const Graph& g, const Coloring& c);
bool is_proper(const Graph& g, const Coloring& c);

/// Psi = pi(type) * gamma(substation).
double vulnerability(const Asset& sm, double gamma, const SmCatalog& catalog);

/// Psi for every vertex of `g`. Throws InputError if a vertex's substation
/// has no profile.
std::vector<double> vulnerability_table(const DiversityGraph& g,
                                        std::span<const SubstationProfile> profiles,
                                        const SmCatalog& catalog);

/// Security index U^v(c) = sum over neighbors w of
/// |strength(c(v)) * psi(v) - strength(c(w)) * psi(w)|.
/// Throws InputError if v or a neighbor is uncolored.
double payoff(Vertex v, const Coloring& c, std::span<const double> psi, const Graph& g,
              const Palette& palette);

/// Security index of every vertex.
std::vector<double> payoffs(const Coloring& c, std::span<const double> psi, const Graph& g,
                            const Palette& palette);

/// Rescales to [0, 10]: 10 * (u - min) / (max - min). All zeros when
/// max == min.
std::vector<double> normalize(std::span<const double> values);

/// sigma: the sum of all security indices.
double cumulative_index(const Coloring& c, std::span<const double> psi, const Graph& g,
                        const Palette& palette);

/// Private color list of a vertex for the randomized algorithm.
using PaletteFactory =
    std::function<std::vector<ColorIndex>(Vertex v, std::size_t degree, Rng& rng)>;

struct RandomizedOptions {
  /// Defaults to a uniform random subset of min(degree + 1, |palette|) colors.
  PaletteFactory factory;
  /// Defaults to 100 * ceil(log2(n + 1)).
  std::optional<std::size_t> round_cap;
};

/// Each round every active vertex draws from its list; a vertex without a
/// conflicting neighbor keeps its color and halts, the others withdraw and
/// drop the colors their halted neighbors now hold.
/// Throws AlgorithmError if the round cap is hit or a list runs dry.
Coloring color_randomized(const Graph& g, const Palette& palette, std::uint64_t seed,
                          const RandomizedOptions& options = {});

/// Descending degree (ties by vertex id), first palette color not used by a
/// colored neighbor. Throws PaletteExhausted if no color fits.
Coloring color_greedy(const Graph& g, const Palette& palette);

/// Vertices in ascending substation order (ties by vertex id); each draws
/// random palette colors until one clashes with no colored neighbor.
/// Throws PaletteExhausted if every color is taken by its neighbors.
Coloring color_sequential(const Graph& g, const Palette& palette,
                          std::span<const int> substation_of, std::uint64_t seed);

/// Player order: SM type rank ascending, substation gamma descending,
/// degree descending, vertex id ascending.
std::vector<Vertex> order_players(const DiversityGraph& g,
                                  std::span<const SubstationProfile> profiles,
                                  const SmCatalog& catalog);

struct NashViolation {
  enum class Kind { kConflict, kImprovement };
  Vertex vertex = 0;
  ColorIndex color = kUncolored;
  Kind kind = Kind::kConflict;
  /// Payoff gain of switching to `color` (0 for conflicts).
  double gain = 0.0;
};

struct NashCertificate {
  bool is_nash = false;
  std::vector<NashViolation> violations;
};

/// Checks that the coloring is proper and that no vertex gains strictly by
/// switching to another color unused by its neighbors.
NashCertificate verify_nash(const Graph& g, const Coloring& c, std::span<const double> psi,
                            const Palette& palette);

struct GameOptions {
  /// Accepted-move cap; defaults to 50 * n.
  std::optional<std::size_t> move_cap;
};

struct GameResult {
  Coloring coloring;
  bool converged = false;
  NashCertificate certificate;
  /// sigma after the initial pass and after every accepted move.
  std::vector<double> potential_trace;
  std::size_t moves = 0;
  /// Set when a profile repeated during best-response play.
  bool cycle_detected = false;
};

/// Graph coloring game. An initial pass in player order gives each vertex
/// the conflict-free color with the highest payoff against its colored
/// neighbors (ties to the stronger color); best-response rounds then let
/// every unsatisfied or improvable player switch, until a round changes
/// nothing. If a player has no conflict-free color it takes the best color
/// overall and stays unsatisfied.
GameResult color_game(const Graph& g, const Palette& palette, std::span<const double> psi,
                      std::span<const Vertex> order, const GameOptions& options = {});

}  // namespace subdiv
