#pragma once

#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <vector>

namespace subdiv {

enum class ImpactClass { kHigh, kLow };

/// "HIS" / "LIS".
std::string_view to_string(ImpactClass c);
std::optional<ImpactClass> impact_class_from_string(std::string_view s);

struct SubstationProfile {
  int substation_id = 0;
  /// Loss of load if the substation is removed, MW.
  double p_lol_mw = 0.0;
  /// Maximum loading level; absent when gamma was supplied directly.
  std::optional<double> l_star;
  double gamma = 0.0;
  ImpactClass impact_class = ImpactClass::kLow;

  /// gamma == 1: the highest level of criticality.
  bool highest_criticality() const { return gamma == 1.0; }
};

struct ImpactConfig {
  /// gamma cutoff; a substation is HIS iff gamma > threshold.
  double threshold = 0.25;
  double p_total_mw = 0.0;

  /// Throws InputError unless 0 < threshold < 1 and p_total_mw > 0.
  void validate() const;
};

/// (p_lol / p_total)^(l_star - 1); exactly 1 when l_star == 1.
/// Throws DomainError if p_lol < 0, p_lol > p_total, p_total <= 0 or l_star < 1.
double impact_factor(double p_lol_mw, double p_total_mw, double l_star);

/// Sets impact_class on each profile: HIS iff gamma > threshold.
std::vector<SubstationProfile> classify(std::vector<SubstationProfile> profiles,
                                        const ImpactConfig& cfg);

/// Sum of p_lol_mw over `compromised`. Throws InputError on unknown ids.
double total_loss_of_load(const std::set<int>& compromised,
                          std::span<const SubstationProfile> profiles);

const SubstationProfile* find_profile(std::span<const SubstationProfile> profiles,
                                      int substation_id);

/// Parses impact data. The header selects the layout:
///   substation_id,p_lol_mw,l_star   gamma computed (needs p_total_mw)
///   substation_id,gamma,p_lol_mw    gamma given
/// Rows come back sorted by substation id, unclassified.
std::vector<SubstationProfile> load_impact_csv(std::string_view text,
                                               std::optional<double> p_total_mw);

}  // namespace subdiv
