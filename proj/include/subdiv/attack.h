#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subdiv/coloring.h"
#include "subdiv/impact.h"
#include "subdiv/security_graph.h"

namespace subdiv {

enum class AttackMode {
  /// Exploits every SM whose color strength is <= k.
  kCapability,
  /// Exploits k distinct colors (zero-days), chosen to maximize damage.
  kBudget,
};

std::string_view to_string(AttackMode m);

struct AttackScenario {
  AttackMode mode = AttackMode::kCapability;
  int k = 0;
  /// Security graph node ids the attacker starts from. Empty means the
  /// entry-point SMs of the target substations.
  std::vector<std::string> entry_nodes;
  std::set<int> target_substations;
  /// Optional overrides carried by scenario files.
  std::optional<double> p_total_mw;
  std::vector<std::pair<SmType, double>> attack_likelihood;

  /// JSON {mode: "capability"|"budget", k, entry_nodes, target_substations,
  /// p_total_mw?, pi?: {SmType: value}}.
  static AttackScenario from_json(std::string_view text);
};

/// Which colors an attacker can exploit.
class ExploitSet {
 public:
  static ExploitSet up_to_strength(int k);
  static ExploitSet of_colors(std::set<ColorIndex> colors);

  bool covers(ColorIndex color, const Palette& palette) const;
  const std::set<ColorIndex>& colors() const { return colors_; }

 private:
  std::optional<int> max_strength_;
  std::set<ColorIndex> colors_;
};

/// A security graph, its diversity graph and a coloring of the latter.
struct ColoredNetwork {
  const SecurityGraph& m;
  const DiversityGraph& g;
  const Coloring& coloring;
  const Palette& palette;

  /// Color of a security graph node; kUncolored for non-SM assets.
  ColorIndex color_of(std::size_t node) const;
};

bool exploitable(Vertex sm, const Coloring& c, const Palette& palette,
                 const ExploitSet& exploits);

struct AttackResult {
  /// Security graph node indices, ascending.
  std::vector<std::size_t> compromised_sms;
  std::set<int> compromised_substations;
  /// Entry-point SMs of the targets that were exploited.
  std::vector<std::size_t> accessed_sms;
  /// Node sequences from an entry node to each accessed SM.
  std::vector<std::vector<std::size_t>> attack_paths;
  /// Substations compromised on the way to a target.
  std::set<int> prerequisites;
  /// Other compromised substations, neither target nor prerequisite.
  std::set<int> propagation;
  double total_p_lol_mw = 0.0;
  /// Budget mode: the color set the attacker picked.
  std::set<ColorIndex> exploited_colors;
};

/// Breadth-first closure from the entry nodes through exploitable SMs.
/// Devices are traversed freely once reached; the control center hub only
/// when it is an entry node. A substation is compromised when one of its
/// entry-point SMs is. In budget mode every SM sharing a color with a
/// compromised SM is compromised as well, and the attacker's color set is the
/// one maximizing the loss of load over all subsets of the colors in use.
/// Throws InputError on unknown entry nodes or target substations.
AttackResult propagate(const ColoredNetwork& net, const AttackScenario& scenario,
                       std::span<const SubstationProfile> profiles);

struct PathDiversity {
  std::vector<std::size_t> path;
  /// Number of distinct colors on the path's SMs.
  int distinct_colors = 0;

  bool feasible_for(int budget) const { return distinct_colors <= budget; }
};

struct PathEnumeration {
  std::vector<PathDiversity> paths;
  /// True if the path cap stopped the search early.
  bool truncated = false;
};

/// All simple paths of at most `max_len` edges from `entry` to an SM of
/// `target_substation`, each ending at the first such SM it reaches. The
/// hub is only traversed as the entry node. Stops after `path_cap` paths.
PathEnumeration enumerate_attack_paths(const ColoredNetwork& net, std::size_t entry,
                                       int target_substation,
                                       std::optional<std::size_t> max_len = std::nullopt,
                                       std::size_t path_cap = 1'000'000);

/// Fewest distinct colors an attacker must exploit to reach an SM of the
/// target from `entry`, found by searching color subsets in size order.
/// nullopt when the target is unreachable even ignoring colors.
std::optional<int> min_exploits_to_compromise(const ColoredNetwork& net, std::size_t entry,
                                              int target_substation);

struct RankedSm {
  Vertex vertex = 0;
  std::string id;
  int substation_id = 0;
  double payoff = 0.0;
  double normalized = 0.0;
};

struct DiversityReport {
  std::size_t colors_used = 0;
  std::vector<std::string> color_names;
  /// Entry [b-1]: largest fraction of entry-point SMs whose colors fit in a
  /// budget of b colors, for b = 1..colors_used.
  std::vector<double> compromised_fraction;
  double sigma = 0.0;
  std::vector<RankedSm> top;
};

DiversityReport diversity_report(const DiversityGraph& g, const Coloring& c,
                                 const Palette& palette, std::span<const double> psi,
                                 std::size_t top_n = 10);

}  // namespace subdiv
