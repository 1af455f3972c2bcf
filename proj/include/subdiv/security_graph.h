#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subdiv/graph.h"
#include "subdiv/grid_model.h"
#include "subdiv/impact.h"

namespace subdiv {

enum class SmType { kScadaFirewall, kVpn, kSystemFirewall, kSystemAuthentication };

inline constexpr std::array<SmType, 4> kAllSmTypes = {
    SmType::kScadaFirewall, SmType::kVpn, SmType::kSystemFirewall,
    SmType::kSystemAuthentication};

std::string_view to_string(SmType t);
std::optional<SmType> sm_type_from_string(std::string_view s);

struct SmTypeInfo {
  SmType type;
  /// 1 = most critical.
  int priority_rank;
  /// Attack likelihood pi, in (0, 1].
  double attack_likelihood;
};

/// Rank and attack likelihood for each SM type. Defaults: SCADA firewall
/// 0.1, VPN 0.2, system firewall 0.5, system authentication 0.8, ranked in
/// that order.
class SmCatalog {
 public:
  SmCatalog();

  const SmTypeInfo& info(SmType t) const { return infos_[static_cast<int>(t)]; }
  double likelihood(SmType t) const { return info(t).attack_likelihood; }
  int rank(SmType t) const { return info(t).priority_rank; }

  /// Throws InputError unless 0 < pi <= 1.
  void set_likelihood(SmType t, double pi);

 private:
  std::array<SmTypeInfo, 4> infos_;
};

enum class AssetKind {
  kSecurityMechanism,
  /// RTUs, relays, gateways: no SM, traversable.
  kDevice,
  /// SCADA control center hub outside every substation perimeter.
  kControlCenter,
};

struct Asset {
  std::string id;
  AssetKind kind = AssetKind::kDevice;
  std::optional<SmType> sm_type;
  /// 0 for assets outside any substation.
  int substation_id = 0;
  bool is_entry_point = false;

  bool is_sm() const { return kind == AssetKind::kSecurityMechanism; }
};

/// Cyber assets and their communication links.
class SecurityGraph {
 public:
  /// Throws InputError on a duplicate id, or an SM without a type.
  std::size_t add_asset(Asset asset);
  /// Throws InputError on unknown ids or a self-loop. Parallel links collapse.
  void connect(std::string_view a, std::string_view b);

  std::size_t size() const noexcept { return assets_.size(); }
  const Asset& asset(std::size_t i) const { return assets_.at(i); }
  std::span<const Asset> assets() const { return assets_; }
  const Graph& topology() const noexcept { return graph_; }
  std::optional<std::size_t> find(std::string_view id) const;
  std::size_t sm_count() const;

 private:
  std::vector<Asset> assets_;
  Graph graph_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// One SM slot of a class template. `{s}` in names expands to the
/// substation id; the full id is "<sub>S_<name>".
struct SmSlot {
  std::string name;
  SmType type;
  bool entry = false;
  /// Linked to the control center hub.
  bool hub_link = false;
};

struct ClassTemplate {
  std::vector<SmSlot> security_mechanisms;
  /// Non-SM devices; the full id is "<sub>_<name>".
  std::vector<std::string> devices;
  /// Intra-substation links between slot or device names.
  std::vector<std::pair<std::string, std::string>> edges;
  /// For adjacent substations a < b: a.initiator -- b.responder.
  std::string initiator;
  std::string responder;
};

/// Per-class substation architecture. The defaults model an HIS and an LIS
/// joined through a VPN; override them to match a real site.
struct TemplateConfig {
  std::string hub_id = "CC";
  std::map<ImpactClass, ClassTemplate> classes;

  static TemplateConfig defaults();
  /// Throws InputError on malformed JSON or dangling references.
  static TemplateConfig from_json(std::string_view text);
  std::string to_json() const;
  void validate() const;
};

/// Instantiates each substation from its class template, joins adjacent
/// substations (initiator of the lower id to responder of the higher id) and
/// links the flagged SCADA firewalls to one control center hub.
/// Throws InputError if a profile's class has no template.
SecurityGraph build_security_graph(std::span<const SubstationProfile> profiles,
                                   const SubstationAdjacency& adjacency,
                                   const TemplateConfig& tmpl);

/// SM-only view of a security graph. Vertex i is the i-th SM of the source
/// graph in insertion order.
class DiversityGraph {
 public:
  DiversityGraph() = default;
  DiversityGraph(Graph graph, std::vector<Asset> sms, std::vector<std::size_t> source);

  const Graph& graph() const noexcept { return graph_; }
  std::size_t size() const noexcept { return sms_.size(); }
  std::size_t degree(Vertex v) const { return graph_.degree(v); }
  const Asset& sm(Vertex v) const { return sms_.at(v); }
  /// Index of the vertex's node in the source security graph.
  std::size_t source(Vertex v) const { return source_.at(v); }
  std::optional<Vertex> vertex_of(std::size_t source_node) const;
  std::optional<Vertex> find(std::string_view id) const;
  /// Substation id of every vertex, in vertex order.
  std::vector<int> substations() const;

 private:
  Graph graph_;
  std::vector<Asset> sms_;
  std::vector<std::size_t> source_;
  std::unordered_map<std::size_t, Vertex> by_source_;
};

/// Two SMs are adjacent iff a path joins them whose interior nodes are all
/// devices. The control center hub is not a pass-through node.
DiversityGraph extract_diversity_graph(const SecurityGraph& m);

/// max over v of the largest deg(u), u in N(v), with deg(u) <= deg(v);
/// 0 for a graph without edges.
std::size_t delta2(const Graph& g);

/// DOT export with sm_type, substation and entry_point attributes.
std::string to_dot(const SecurityGraph& m);

}  // namespace subdiv
