#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subdiv {

struct Bus {
  int id = 0;
  double load_mw = 0.0;
  std::string name;

  bool operator==(const Bus&) const = default;
};

struct Branch {
  int from_bus = 0;
  int to_bus = 0;

  bool operator==(const Branch&) const = default;
};

/// Bus/branch records of a power system. Immutable once parsed.
struct BusSystem {
  std::string title;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  /// Defaults to the sum of bus loads; scenarios may pin a different value.
  double total_load_mw = 0.0;

  const Bus* find_bus(int id) const;
  double bus_load_sum() const;

  bool operator==(const BusSystem&) const = default;
};

/// Reads the BUS DATA and BRANCH DATA sections of an IEEE Common Data
/// Format file. Other sections are skipped. Bus load is the PL column.
///
/// Bus records are read as: bus number (columns 1-4), name (columns 6-17),
/// then whitespace-separated fields area, zone, type, V, angle, PL, ...
/// Branch records use the first two fields (tap bus, Z bus).
///
/// Throws ParseError naming the offending line.
BusSystem parse_cdf(std::string_view text);

/// Canonical CDF text for `sys`; parse_cdf(write_cdf(s)) == s when
/// s.total_load_mw equals the bus load sum and names fit in 12 columns.
std::string write_cdf(const BusSystem& sys);

/// Substation id -> bus ids. Ids run 1..N; a bus belongs to at most one
/// substation. Buses may be left unmapped.
class SubstationMap {
 public:
  SubstationMap() = default;
  /// Validates; throws InputError on an empty bus list, a bus assigned
  /// twice, or non-contiguous substation ids.
  explicit SubstationMap(std::map<int, std::vector<int>> entries);

  /// One substation per bus, numbered in bus order.
  static SubstationMap identity(const BusSystem& sys);

  const std::map<int, std::vector<int>>& entries() const noexcept {
    return entries_;
  }
  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(int substation) const { return entries_.count(substation); }
  std::optional<int> substation_of(int bus) const;
  const std::vector<int>& buses(int substation) const;

  /// Sum of loads of the buses in `substation`.
  double load_of(int substation, const BusSystem& sys) const;

 private:
  std::map<int, std::vector<int>> entries_;
  std::map<int, int> bus_to_sub_;
};

/// Accepts JSON (`{"1":[1],"4":[4,7,8,9]}`) or CSV (`substation_id,bus_id`
/// rows, optional header, `#` comments).
SubstationMap load_substation_map(std::string_view text);

/// Symmetric, irreflexive relation over substation ids.
class SubstationAdjacency {
 public:
  void connect(int a, int b);
  bool adjacent(int a, int b) const;
  const std::set<int>& neighbors(int substation) const;
  /// Unordered pairs (a < b), sorted.
  std::vector<std::pair<int, int>> pairs() const;

 private:
  std::map<int, std::set<int>> neighbors_;
};

/// Substations A and B are adjacent iff a branch joins a bus of A to a bus
/// of B. Branches touching unmapped buses are ignored.
SubstationAdjacency substation_adjacency(const BusSystem& sys,
                                         const SubstationMap& map);

}  // namespace subdiv
