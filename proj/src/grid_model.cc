#include "subdiv/grid_model.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "subdiv/error.h"
#include "subdiv/text.h"

namespace subdiv {

namespace {

enum class Section { kNone, kBus, kBranch, kSkipped };

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

Bus parse_bus_record(std::string_view line, int lineno) {
  if (line.size() < 18) throw ParseError(lineno, "truncated bus record");
  auto id = text::to_int(line.substr(0, 5));
  if (!id) throw ParseError(lineno, "non-numeric bus number");
  if (*id <= 0) throw ParseError(lineno, "bus number must be positive");
  auto fields = text::tokens(line.substr(17));
  // area, zone, type, V, angle, PL
  if (fields.size() < 6) throw ParseError(lineno, "bus record has too few fields");
  auto load = text::to_double(fields[5]);
  if (!load) {
    throw ParseError(lineno, fmt::format("non-numeric load field '{}'",
                                         std::string(fields[5])));
  }
  return Bus{*id, *load, std::string(text::trim(line.substr(5, 12)))};
}

struct BranchRecord {
  Branch branch;
  int line;
};

BranchRecord parse_branch_record(std::string_view line, int lineno) {
  auto fields = text::tokens(line);
  if (fields.size() < 2) throw ParseError(lineno, "branch record has too few fields");
  auto from = text::to_int(fields[0]);
  auto to = text::to_int(fields[1]);
  if (!from || !to) throw ParseError(lineno, "non-numeric branch endpoint");
  return {Branch{*from, *to}, lineno};
}

}  // namespace

const Bus* BusSystem::find_bus(int id) const {
  auto it = std::find_if(buses.begin(), buses.end(),
                         [id](const Bus& b) { return b.id == id; });
  return it == buses.end() ? nullptr : &*it;
}

double BusSystem::bus_load_sum() const {
  return std::accumulate(buses.begin(), buses.end(), 0.0,
                         [](double acc, const Bus& b) { return acc + b.load_mw; });
}

BusSystem parse_cdf(std::string_view input) {
  BusSystem sys;
  std::vector<BranchRecord> branch_records;
  Section section = Section::kNone;
  int section_line = 0;
  int bus_header_line = 0;
  bool seen_bus = false;
  bool seen_branch = false;

  const auto all = text::lines(input);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    const std::string_view raw = all[i];
    const std::string_view line = text::trim(raw);
    if (i == 0) {  // title card
      sys.title = std::string(line);
      continue;
    }
    if (line.empty()) continue;

    const bool header = line.find("FOLLOWS") != std::string_view::npos;
    if (section != Section::kNone) {
      if (starts_with(line, "-9")) {
        section = Section::kNone;
        continue;
      }
      if (header) {
        throw ParseError(lineno, fmt::format("section opened on line {} is not "
                                             "terminated before a new header",
                                             section_line));
      }
      if (section == Section::kBus) sys.buses.push_back(parse_bus_record(raw, lineno));
      if (section == Section::kBranch)
        branch_records.push_back(parse_branch_record(raw, lineno));
      continue;
    }

    if (starts_with(line, "END OF DATA")) break;
    if (!header) throw ParseError(lineno, "expected a section header");
    section_line = lineno;
    if (starts_with(line, "BUS DATA FOLLOWS")) {
      if (seen_bus) throw ParseError(lineno, "duplicate BUS DATA section");
      seen_bus = true;
      bus_header_line = lineno;
      section = Section::kBus;
    } else if (starts_with(line, "BRANCH DATA FOLLOWS")) {
      if (seen_branch) throw ParseError(lineno, "duplicate BRANCH DATA section");
      seen_branch = true;
      section = Section::kBranch;
    } else if (starts_with(line, "BUS") || starts_with(line, "BRANCH")) {
      throw ParseError(lineno, "malformed section header");
    } else {
      section = Section::kSkipped;
    }
  }
  if (section != Section::kNone) {
    throw ParseError(section_line, "section is not terminated");
  }
  if (!seen_bus || sys.buses.empty()) {
    throw ParseError(seen_bus ? bus_header_line : 1, "no buses");
  }
  if (!seen_branch) throw ParseError(static_cast<int>(all.size()), "missing BRANCH DATA section");

  std::set<int> ids;
  for (const Bus& b : sys.buses) {
    if (!ids.insert(b.id).second)
      throw InputError(fmt::format("duplicate bus number {}", b.id));
  }
  for (const auto& rec : branch_records) {
    for (int end : {rec.branch.from_bus, rec.branch.to_bus}) {
      if (!ids.count(end)) {
        throw ParseError(rec.line, fmt::format("branch references unknown bus {}", end));
      }
    }
    if (rec.branch.from_bus == rec.branch.to_bus) {
      throw ParseError(rec.line,
                       fmt::format("branch joins bus {} to itself", rec.branch.from_bus));
    }
    sys.branches.push_back(rec.branch);
  }
  sys.total_load_mw = sys.bus_load_sum();
  return sys;
}

std::string write_cdf(const BusSystem& sys) {
  std::string out = sys.title + "\n";
  out += fmt::format("BUS DATA FOLLOWS                            {} ITEMS\n",
                     sys.buses.size());
  for (const Bus& b : sys.buses) {
    out += fmt::format("{:>4} {:<12}  1  1  0 1.000    0.0 {:>8}      0.0      0.0     "
                       "0.0     0.0  0.0       0.0     0.0   0.0    0.0        0\n",
                       b.id, b.name.substr(0, 12), b.load_mw);
  }
  out += "-999\n";
  out += fmt::format("BRANCH DATA FOLLOWS                         {} ITEMS\n",
                     sys.branches.size());
  for (const Branch& br : sys.branches) {
    out += fmt::format("{:>4} {:>4}  1  1 1 0  0.0       0.1         0.0       0     0     0"
                       "    0 0  0.0       0.0 0.0    0.0     0.0    0.0   0.0\n",
                       br.from_bus, br.to_bus);
  }
  out += "-999\nEND OF DATA\n";
  return out;
}

SubstationMap::SubstationMap(std::map<int, std::vector<int>> entries) {
  int expected = 1;
  for (auto& [sub, buses] : entries) {
    if (sub != expected) {
      throw InputError(fmt::format(
          "substation ids must be contiguous from 1; expected {}, found {}", expected, sub));
    }
    ++expected;
    if (buses.empty()) throw InputError(fmt::format("substation {} has no buses", sub));
    std::sort(buses.begin(), buses.end());
    for (int bus : buses) {
      auto [it, fresh] = bus_to_sub_.emplace(bus, sub);
      if (!fresh) {
        throw InputError(fmt::format("bus {} assigned to substations {} and {}", bus,
                                     it->second, sub));
      }
    }
  }
  entries_ = std::move(entries);
}

SubstationMap SubstationMap::identity(const BusSystem& sys) {
  std::map<int, std::vector<int>> entries;
  int sub = 1;
  for (const Bus& b : sys.buses) entries[sub++] = {b.id};
  return SubstationMap(std::move(entries));
}

std::optional<int> SubstationMap::substation_of(int bus) const {
  auto it = bus_to_sub_.find(bus);
  if (it == bus_to_sub_.end()) return std::nullopt;
  return it->second;
}

const std::vector<int>& SubstationMap::buses(int substation) const {
  auto it = entries_.find(substation);
  if (it == entries_.end())
    throw InputError(fmt::format("unknown substation {}", substation));
  return it->second;
}

double SubstationMap::load_of(int substation, const BusSystem& sys) const {
  double total = 0.0;
  for (int bus : buses(substation)) {
    if (const Bus* b = sys.find_bus(bus)) total += b->load_mw;
  }
  return total;
}

SubstationMap load_substation_map(std::string_view input) {
  std::map<int, std::vector<int>> entries;
  const std::string_view body = text::trim(input);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("substation map: ") + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
      auto sub = text::to_int(key);
      if (!sub) throw InputError("substation map: non-numeric substation id '" + key + "'");
      if (!value.is_array())
        throw InputError("substation map: bus list for " + key + " is not an array");
      auto& buses = entries[*sub];
      for (const auto& bus : value) {
        if (!bus.is_number_integer())
          throw InputError("substation map: non-integer bus id under " + key);
        if (std::find(buses.begin(), buses.end(), bus.get<int>()) != buses.end()) {
          throw InputError(fmt::format("bus {} listed twice in substation {}",
                                       bus.get<int>(), *sub));
        }
        buses.push_back(bus.get<int>());
      }
    }
    return SubstationMap(std::move(entries));
  }

  const auto rows = text::lines(input);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    const auto row = text::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    auto fields = text::split(row, ',');
    if (fields.size() != 2) throw ParseError(lineno, "expected substation_id,bus_id");
    auto sub = text::to_int(fields[0]);
    auto bus = text::to_int(fields[1]);
    if (!sub || !bus) {
      if (entries.empty() && !sub && !bus) continue;  // header
      throw ParseError(lineno, "non-numeric field");
    }
    auto& buses = entries[*sub];
    if (std::find(buses.begin(), buses.end(), *bus) != buses.end()) {
      throw ParseError(lineno, fmt::format("bus {} listed twice in substation {}", *bus, *sub));
    }
    buses.push_back(*bus);
  }
  return SubstationMap(std::move(entries));
}

void SubstationAdjacency::connect(int a, int b) {
  if (a == b) return;
  neighbors_[a].insert(b);
  neighbors_[b].insert(a);
}

bool SubstationAdjacency::adjacent(int a, int b) const {
  auto it = neighbors_.find(a);
  return it != neighbors_.end() && it->second.count(b);
}

const std::set<int>& SubstationAdjacency::neighbors(int substation) const {
  static const std::set<int> kNone;
  auto it = neighbors_.find(substation);
  return it == neighbors_.end() ? kNone : it->second;
}

std::vector<std::pair<int, int>> SubstationAdjacency::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [a, ns] : neighbors_)
    for (int b : ns)
      if (a < b) out.emplace_back(a, b);
  return out;
}

SubstationAdjacency substation_adjacency(const BusSystem& sys, const SubstationMap& map) {
  SubstationAdjacency adj;
  for (const Branch& br : sys.branches) {
    auto a = map.substation_of(br.from_bus);
    auto b = map.substation_of(br.to_bus);
    if (a && b && *a != *b) adj.connect(*a, *b);
  }
  return adj;
}

}  // namespace subdiv
