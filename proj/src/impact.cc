#include "subdiv/impact.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "subdiv/error.h"
#include "subdiv/text.h"

namespace subdiv {

std::string_view to_string(ImpactClass c) {
  return c == ImpactClass::kHigh ? "HIS" : "LIS";
}

std::optional<ImpactClass> impact_class_from_string(std::string_view s) {
  if (s == "HIS") return ImpactClass::kHigh;
  if (s == "LIS") return ImpactClass::kLow;
  return std::nullopt;
}

void ImpactConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw InputError(fmt::format("threshold {} must lie strictly in (0, 1)", threshold));
  if (!(p_total_mw > 0.0))
    throw InputError(fmt::format("total load {} MW must be positive", p_total_mw));
}

double impact_factor(double p_lol_mw, double p_total_mw, double l_star) {
  if (!(p_total_mw > 0.0)) throw DomainError("impact_factor: total load must be positive");
  if (!(p_lol_mw >= 0.0)) throw DomainError("impact_factor: loss of load must be >= 0");
  if (p_lol_mw > p_total_mw) {
    throw DomainError(fmt::format("impact_factor: loss of load {} exceeds total load {}",
                                  p_lol_mw, p_total_mw));
  }
  if (!(l_star >= 1.0)) throw DomainError("impact_factor: loading level must be >= 1");
  if (l_star == 1.0) return 1.0;  // covers 0^0
  return std::pow(p_lol_mw / p_total_mw, l_star - 1.0);
}

std::vector<SubstationProfile> classify(std::vector<SubstationProfile> profiles,
                                        const ImpactConfig& cfg) {
  for (auto& p : profiles)
    p.impact_class = p.gamma > cfg.threshold ? ImpactClass::kHigh : ImpactClass::kLow;
  return profiles;
}

const SubstationProfile* find_profile(std::span<const SubstationProfile> profiles,
                                      int substation_id) {
  for (const auto& p : profiles)
    if (p.substation_id == substation_id) return &p;
  return nullptr;
}

double total_loss_of_load(const std::set<int>& compromised,
                          std::span<const SubstationProfile> profiles) {
  double total = 0.0;
  for (int id : compromised) {
    const SubstationProfile* p = find_profile(profiles, id);
    if (!p) throw InputError(fmt::format("unknown substation {}", id));
    total += p->p_lol_mw;
  }
  return total;
}

std::vector<SubstationProfile> load_impact_csv(std::string_view input,
                                               std::optional<double> p_total_mw) {
  enum class Layout { kLoadingLevel, kGamma };
  std::optional<Layout> layout;
  std::vector<SubstationProfile> out;
  const auto rows = text::lines(input);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    const auto row = text::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    auto fields = text::split(row, ',');
    for (auto& f : fields) f = text::trim(f);
    if (!layout) {
      if (fields.size() == 3 && fields[0] == "substation_id" && fields[1] == "p_lol_mw" &&
          fields[2] == "l_star") {
        layout = Layout::kLoadingLevel;
      } else if (fields.size() == 3 && fields[0] == "substation_id" &&
                 fields[1] == "gamma" && fields[2] == "p_lol_mw") {
        layout = Layout::kGamma;
      } else {
        throw ParseError(lineno,
                         "expected header 'substation_id,p_lol_mw,l_star' or "
                         "'substation_id,gamma,p_lol_mw'");
      }
      if (layout == Layout::kLoadingLevel && !p_total_mw)
        throw InputError("impact data with l_star needs a total system load");
      continue;
    }
    if (fields.size() != 3) throw ParseError(lineno, "expected 3 fields");
    auto id = text::to_int(fields[0]);
    auto a = text::to_double(fields[1]);
    auto b = text::to_double(fields[2]);
    if (!id || !a || !b) throw ParseError(lineno, "non-numeric field");
    SubstationProfile p;
    p.substation_id = *id;
    try {
      if (layout == Layout::kLoadingLevel) {
        p.p_lol_mw = *a;
        p.l_star = *b;
        p.gamma = impact_factor(*a, *p_total_mw, *b);
      } else {
        if (!(*a >= 0.0 && *a <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
        if (!(*b >= 0.0)) throw DomainError("loss of load must be >= 0");
        p.gamma = *a;
        p.p_lol_mw = *b;
      }
    } catch (const DomainError& e) {
      throw ParseError(lineno, e.what());
    }
    if (find_profile(out, p.substation_id))
      throw ParseError(lineno, fmt::format("duplicate substation {}", p.substation_id));
    out.push_back(p);
  }
  if (out.empty()) throw InputError("impact data has no substations");
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.substation_id < y.substation_id;
  });
  return out;
}

}  // namespace subdiv
