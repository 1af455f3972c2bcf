#include "subdiv/security_graph.h"

#include <algorithm>
#include <deque>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "subdiv/error.h"

namespace subdiv {

namespace {

std::string expand(std::string_view name, int substation) {
  std::string out(name);
  const std::string sub = std::to_string(substation);
  for (auto pos = out.find("{s}"); pos != std::string::npos; pos = out.find("{s}", pos))
    out.replace(pos, 3, sub);
  return out;
}

std::string sm_id(std::string_view name, int substation) {
  return fmt::format("{}S_{}", substation, expand(name, substation));
}

std::string device_id(std::string_view name, int substation) {
  return fmt::format("{}_{}", substation, expand(name, substation));
}

const SmSlot* find_slot(const ClassTemplate& t, std::string_view name) {
  for (const auto& s : t.security_mechanisms)
    if (s.name == name) return &s;
  return nullptr;
}

std::string local_id(const ClassTemplate& t, std::string_view name, int substation) {
  return find_slot(t, name) ? sm_id(name, substation) : device_id(name, substation);
}

}  // namespace

std::string_view to_string(SmType t) {
  switch (t) {
    case SmType::kScadaFirewall: return "ScadaFirewall";
    case SmType::kVpn: return "Vpn";
    case SmType::kSystemFirewall: return "SystemFirewall";
    case SmType::kSystemAuthentication: return "SystemAuthentication";
  }
  return "?";
}

std::optional<SmType> sm_type_from_string(std::string_view s) {
  for (SmType t : kAllSmTypes)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

SmCatalog::SmCatalog()
    : infos_{{{SmType::kScadaFirewall, 1, 0.1},
              {SmType::kVpn, 2, 0.2},
              {SmType::kSystemFirewall, 3, 0.5},
              {SmType::kSystemAuthentication, 4, 0.8}}} {}

void SmCatalog::set_likelihood(SmType t, double pi) {
  if (!(pi > 0.0 && pi <= 1.0))
    throw InputError(fmt::format("attack likelihood {} for {} must lie in (0, 1]", pi,
                                 to_string(t)));
  infos_[static_cast<int>(t)].attack_likelihood = pi;
}

std::size_t SecurityGraph::add_asset(Asset asset) {
  if (asset.is_sm() && !asset.sm_type)
    throw InputError("security mechanism " + asset.id + " has no type");
  if (!asset.is_sm()) asset.sm_type.reset();
  if (index_.count(asset.id)) throw InputError("duplicate asset id " + asset.id);
  const std::size_t i = graph_.add_vertex();
  index_.emplace(asset.id, i);
  assets_.push_back(std::move(asset));
  return i;
}

void SecurityGraph::connect(std::string_view a, std::string_view b) {
  auto ia = find(a);
  auto ib = find(b);
  if (!ia) throw InputError("unknown asset " + std::string(a));
  if (!ib) throw InputError("unknown asset " + std::string(b));
  if (*ia == *ib) throw InputError("self-link on asset " + std::string(a));
  graph_.add_edge(*ia, *ib);
}

std::optional<std::size_t> SecurityGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SecurityGraph::sm_count() const {
  return static_cast<std::size_t>(
      std::count_if(assets_.begin(), assets_.end(), [](const Asset& a) { return a.is_sm(); }));
}

TemplateConfig TemplateConfig::defaults() {
  TemplateConfig cfg;
  // HIS: SCADA firewall, VPN, two system firewalls, two authentications.
  ClassTemplate his;
  his.security_mechanisms = {
      {"fwH", SmType::kScadaFirewall, true, true},
      {"vpn{s}", SmType::kVpn, true, false},
      {"fw1", SmType::kSystemFirewall, true, false},
      {"fw{s}1", SmType::kSystemFirewall, false, false},
      {"vpn{s}2", SmType::kSystemAuthentication, false, false},
      {"vpn{s}3", SmType::kSystemAuthentication, false, false},
  };
  his.devices = {"GW", "RTU", "R1", "R2"};
  his.edges = {{"fwH", "GW"},     {"GW", "vpn{s}"},  {"fwH", "RTU"},
               {"RTU", "fw{s}1"}, {"fw{s}1", "R1"},  {"R1", "vpn{s}2"},
               {"fw{s}1", "R2"},  {"R2", "vpn{s}3"}, {"vpn{s}3", "fw1"}};
  his.initiator = "vpn{s}";
  his.responder = "fw1";
  cfg.classes[ImpactClass::kHigh] = std::move(his);

  // LIS: SCADA firewall, VPN, one system firewall, one authentication.
  ClassTemplate lis;
  lis.security_mechanisms = {
      {"fwL", SmType::kScadaFirewall, true, true},
      {"vpn{s}", SmType::kVpn, true, false},
      {"fw1", SmType::kSystemFirewall, true, false},
      {"vpn{s}3", SmType::kSystemAuthentication, false, false},
  };
  lis.devices = {"GW", "RTU", "R1"};
  lis.edges = {{"fwL", "GW"},  {"GW", "vpn{s}"},   {"fwL", "RTU"},
               {"RTU", "vpn{s}3"}, {"vpn{s}3", "R1"}, {"R1", "fw1"}};
  lis.initiator = "vpn{s}";
  lis.responder = "fw1";
  cfg.classes[ImpactClass::kLow] = std::move(lis);
  return cfg;
}

void TemplateConfig::validate() const {
  for (const auto& [cls, t] : classes) {
    const std::string where = fmt::format("template class {}", to_string(cls));
    std::set<std::string> names;
    for (const auto& s : t.security_mechanisms)
      if (!names.insert(s.name).second) throw InputError(where + ": duplicate name " + s.name);
    for (const auto& d : t.devices)
      if (!names.insert(d).second) throw InputError(where + ": duplicate name " + d);
    for (const auto& [a, b] : t.edges) {
      if (!names.count(a) || !names.count(b))
        throw InputError(where + ": edge references unknown node " + (names.count(a) ? b : a));
      if (a == b) throw InputError(where + ": self-loop on " + a);
    }
    if (!find_slot(t, t.initiator))
      throw InputError(where + ": link initiator '" + t.initiator + "' is not an SM");
    if (!find_slot(t, t.responder))
      throw InputError(where + ": link responder '" + t.responder + "' is not an SM");
  }
}

TemplateConfig TemplateConfig::from_json(std::string_view text) {
  using nlohmann::json;
  TemplateConfig cfg;
  try {
    const json doc = json::parse(text);
    cfg.hub_id = doc.value("hub", std::string("CC"));
    for (const auto& [key, body] : doc.at("classes").items()) {
      auto cls = impact_class_from_string(key);
      if (!cls) throw InputError("template: unknown class '" + key + "'");
      ClassTemplate t;
      for (const auto& s : body.at("security_mechanisms")) {
        auto type = sm_type_from_string(s.at("type").get<std::string>());
        if (!type) throw InputError("template: unknown SM type " + s.at("type").dump());
        t.security_mechanisms.push_back({s.at("name").get<std::string>(), *type,
                                         s.value("entry", false), s.value("hub_link", false)});
      }
      t.devices = body.value("devices", std::vector<std::string>{});
      for (const auto& e : body.value("edges", json::array()))
        t.edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
      t.initiator = body.at("link").at("initiator").get<std::string>();
      t.responder = body.at("link").at("responder").get<std::string>();
      cfg.classes[*cls] = std::move(t);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("template: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string TemplateConfig::to_json() const {
  using nlohmann::json;
  json doc;
  doc["hub"] = hub_id;
  for (const auto& [cls, t] : classes) {
    json body;
    body["security_mechanisms"] = json::array();
    for (const auto& s : t.security_mechanisms) {
      body["security_mechanisms"].push_back({{"name", s.name},
                                             {"type", std::string(to_string(s.type))},
                                             {"entry", s.entry},
                                             {"hub_link", s.hub_link}});
    }
    body["devices"] = t.devices;
    body["edges"] = json::array();
    for (const auto& [a, b] : t.edges) body["edges"].push_back({a, b});
    body["link"] = {{"initiator", t.initiator}, {"responder", t.responder}};
    doc["classes"][std::string(to_string(cls))] = std::move(body);
  }
  return doc.dump(2) + "\n";
}

SecurityGraph build_security_graph(std::span<const SubstationProfile> profiles,
                                   const SubstationAdjacency& adjacency,
                                   const TemplateConfig& tmpl) {
  tmpl.validate();
  SecurityGraph m;
  std::map<int, const ClassTemplate*> by_sub;
  bool need_hub = false;
  for (const auto& p : profiles) {
    auto it = tmpl.classes.find(p.impact_class);
    if (it == tmpl.classes.end())
      throw InputError(fmt::format("template missing class {}", to_string(p.impact_class)));
    by_sub[p.substation_id] = &it->second;
    for (const auto& s : it->second.security_mechanisms) need_hub |= s.hub_link;
  }
  if (need_hub) m.add_asset({tmpl.hub_id, AssetKind::kControlCenter, std::nullopt, 0, false});

  for (const auto& [sub, t] : by_sub) {
    for (const auto& s : t->security_mechanisms) {
      m.add_asset({sm_id(s.name, sub), AssetKind::kSecurityMechanism, s.type, sub, s.entry});
      if (s.hub_link) m.connect(tmpl.hub_id, sm_id(s.name, sub));
    }
    for (const auto& d : t->devices)
      m.add_asset({device_id(d, sub), AssetKind::kDevice, std::nullopt, sub, false});
    for (const auto& [a, b] : t->edges) m.connect(local_id(*t, a, sub), local_id(*t, b, sub));
  }

  for (const auto& [a, b] : adjacency.pairs()) {
    auto ta = by_sub.find(a);
    auto tb = by_sub.find(b);
    if (ta == by_sub.end() || tb == by_sub.end()) continue;
    m.connect(sm_id(ta->second->initiator, a), sm_id(tb->second->responder, b));
  }
  return m;
}

DiversityGraph::DiversityGraph(Graph graph, std::vector<Asset> sms,
                               std::vector<std::size_t> source)
    : graph_(std::move(graph)), sms_(std::move(sms)), source_(std::move(source)) {
  for (Vertex v = 0; v < source_.size(); ++v) by_source_.emplace(source_[v], v);
}

std::optional<Vertex> DiversityGraph::vertex_of(std::size_t source_node) const {
  auto it = by_source_.find(source_node);
  if (it == by_source_.end()) return std::nullopt;
  return it->second;
}

std::optional<Vertex> DiversityGraph::find(std::string_view id) const {
  for (Vertex v = 0; v < sms_.size(); ++v)
    if (sms_[v].id == id) return v;
  return std::nullopt;
}

std::vector<int> DiversityGraph::substations() const {
  std::vector<int> out;
  out.reserve(sms_.size());
  for (const auto& s : sms_) out.push_back(s.substation_id);
  return out;
}

DiversityGraph extract_diversity_graph(const SecurityGraph& m) {
  const Graph& topo = m.topology();
  std::vector<Asset> sms;
  std::vector<std::size_t> source;
  std::vector<std::optional<Vertex>> vertex(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m.asset(i).is_sm()) continue;
    vertex[i] = sms.size();
    sms.push_back(m.asset(i));
    source.push_back(i);
  }

  Graph g(sms.size());
  std::vector<std::size_t> seen(m.size(), SIZE_MAX);
  for (Vertex v = 0; v < sms.size(); ++v) {
    const std::size_t start = source[v];
    std::deque<std::size_t> queue{start};
    seen[start] = v;
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t y : topo.neighbors(x)) {
        if (seen[y] == v) continue;
        seen[y] = v;
        const Asset& a = m.asset(y);
        if (a.is_sm()) {
          g.add_edge(v, *vertex[y]);
        } else if (a.kind == AssetKind::kDevice) {
          queue.push_back(y);
        }
      }
    }
  }
  return DiversityGraph(std::move(g), std::move(sms), std::move(source));
}

std::size_t delta2(const Graph& g) {
  std::size_t best = 0;
  for (Vertex v = 0; v < g.size(); ++v) {
    const std::size_t dv = g.degree(v);
    for (Vertex u : g.neighbors(v)) {
      const std::size_t du = g.degree(u);
      if (du <= dv) best = std::max(best, du);
    }
  }
  return best;
}

std::string to_dot(const SecurityGraph& m) {
  std::string out = "graph security {\n";
  for (const Asset& a : m.assets()) {
    if (a.is_sm()) {
      out += fmt::format(
          "  \"{}\" [shape=box, sm_type=\"{}\", substation={}, entry_point={}];\n", a.id,
          to_string(*a.sm_type), a.substation_id, a.is_entry_point ? "true" : "false");
    } else {
      out += fmt::format("  \"{}\" [shape=ellipse, kind=\"{}\", substation={}];\n", a.id,
                         a.kind == AssetKind::kControlCenter ? "control_center" : "device",
                         a.substation_id);
    }
  }
  const Graph& topo = m.topology();
  for (std::size_t u = 0; u < topo.size(); ++u)
    for (std::size_t v : topo.neighbors(u))
      if (u < v) out += fmt::format("  \"{}\" -- \"{}\";\n", m.asset(u).id, m.asset(v).id);
  out += "}\n";
  return out;
}

}  // namespace subdiv
