#include <doctest.h>

#include <set>

#include "subdiv/error.h"
#include "subdiv/grid_model.h"
#include "subdiv/random.h"
#include "subdiv/text.h"
#include "support.h"

using namespace subdiv;

namespace {

BusSystem ieee14() { return parse_cdf(text::read_file(testing::data_path("ieee14/system.cdf"))); }
SubstationMap ieee14_map() {
  return load_substation_map(text::read_file(testing::data_path("ieee14/submap.json")));
}

std::string tiny_cdf(const std::string& branch_rows) {
  return "TINY\n"
         "BUS DATA FOLLOWS 2 ITEMS\n"
         "   1 One          1  1  3 1.0 0.0 10.0 0.0\n"
         "   2 Two          1  1  0 1.0 0.0 5.5 0.0\n"
         "-999\n"
         "BRANCH DATA FOLLOWS 1 ITEMS\n" +
         branch_rows +
         "-999\n"
         "END OF DATA\n";
}

}  // namespace

TEST_CASE("IEEE-14 file has 14 buses and 20 branches") {
  const BusSystem sys = ieee14();
  CHECK(sys.buses.size() == 14);
  CHECK(sys.branches.size() == 20);
  CHECK(sys.find_bus(3)->load_mw == doctest::Approx(94.2));
  CHECK(sys.find_bus(1)->load_mw == 0.0);
  CHECK(sys.total_load_mw == doctest::Approx(259.0));
}

TEST_CASE("parse_cdf errors name the problem") {
  CHECK_THROWS_WITH_AS(parse_cdf("T\nBUS DATA FOLLOWS\n-999\nBRANCH DATA FOLLOWS\n-999\n"),
                       doctest::Contains("no buses"), ParseError);
  CHECK_THROWS_WITH_AS(parse_cdf(tiny_cdf("   1   99  1  1 1 0 0.1 0.1 0.0\n")),
                       doctest::Contains("99"), ParseError);
  CHECK_THROWS_AS(parse_cdf(tiny_cdf("   1   xx  1  1 1 0 0.1 0.1 0.0\n")), ParseError);
  CHECK_THROWS_AS(parse_cdf("T\nBUS DATA FOLLOWS\n   1 One          1  1  3 1.0 0.0 10.0\n"),
                  ParseError);
  CHECK_NOTHROW(parse_cdf(tiny_cdf("   1    2  1  1 1 0 0.1 0.1 0.0\n")));
}

TEST_CASE("parse_cdf error carries the line number") {
  try {
    parse_cdf(tiny_cdf("   1   99  1  1 1 0 0.1 0.1 0.0\n"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
}

TEST_CASE("write_cdf round-trips") {
  const BusSystem sys = ieee14();
  CHECK(parse_cdf(write_cdf(sys)) == sys);

  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    BusSystem s;
    s.title = "RANDOM";
    const int n = 2 + static_cast<int>(rng.index(30));
    for (int i = 1; i <= n; ++i)
      s.buses.push_back({i, static_cast<double>(rng.index(2000)) / 10.0, "B" + std::to_string(i)});
    for (int i = 2; i <= n; ++i) s.branches.push_back({1 + static_cast<int>(rng.index(i - 1)), i});
    s.total_load_mw = s.bus_load_sum();
    CHECK(parse_cdf(write_cdf(s)) == s);
  }
}

TEST_CASE("IEEE-14 substation map") {
  const SubstationMap map = ieee14_map();
  CHECK(map.size() == 10);
  CHECK(map.buses(4) == std::vector<int>{4, 7, 8, 9});
  CHECK(map.buses(5) == std::vector<int>{5, 6});
  CHECK(map.buses(10) == std::vector<int>{14});
  CHECK(map.substation_of(8) == 4);

  const SubstationMap csv = load_substation_map(
      "substation_id,bus_id\n1,1\n2,2\n3,3\n4,4\n4,7\n4,8\n4,9\n5,5\n5,6\n6,10\n# comment\n"
      "7,11\n8,12\n9,13\n10,14\n");
  CHECK(csv.entries() == map.entries());
}

TEST_CASE("substation map validation") {
  CHECK_THROWS_AS(load_substation_map(R"({"1":[3],"2":[3]})"), InputError);
  CHECK_THROWS_AS(load_substation_map(R"({"1":[1],"2":[]})"), InputError);
  CHECK_THROWS_AS(load_substation_map(R"({"1":[1],"3":[2]})"), InputError);
  CHECK(SubstationMap::identity(ieee14()).size() == 14);
}

TEST_CASE("loads add up over substations and unmapped buses") {
  const BusSystem sys = ieee14();
  const SubstationMap map(std::map<int, std::vector<int>>{{1, {2, 3}}, {2, {9}}});
  double total = 0.0;
  for (const auto& [sub, buses] : map.entries()) total += map.load_of(sub, sys);
  for (const Bus& b : sys.buses)
    if (!map.substation_of(b.id)) total += b.load_mw;
  CHECK(total == doctest::Approx(sys.bus_load_sum()));
}

TEST_CASE("IEEE-14 substation adjacency matches a scan of the branches") {
  const BusSystem sys = ieee14();
  const SubstationMap map = ieee14_map();
  const SubstationAdjacency adj = substation_adjacency(sys, map);

  std::set<std::pair<int, int>> expected;
  for (const Branch& br : sys.branches) {
    const int a = *map.substation_of(br.from_bus), b = *map.substation_of(br.to_bus);
    if (a != b) expected.insert(std::minmax(a, b));
  }
  const auto pairs = adj.pairs();
  CHECK(std::set<std::pair<int, int>>(pairs.begin(), pairs.end()) == expected);
  CHECK(pairs.size() == 15);
  CHECK(adj.neighbors(2) == std::set<int>{1, 3, 4, 5});

  for (int a = 1; a <= 10; ++a) {
    CHECK_FALSE(adj.adjacent(a, a));
    for (int b = 1; b <= 10; ++b) CHECK(adj.adjacent(a, b) == adj.adjacent(b, a));
  }
}

TEST_CASE("adjacency degenerate cases") {
  const BusSystem sys = ieee14();
  std::vector<int> all;
  for (int i = 1; i <= 14; ++i) all.push_back(i);
  CHECK(substation_adjacency(sys, SubstationMap({{1, all}})).pairs().empty());
  const SubstationMap apart({{1, {1}}, {2, {14}}});
  CHECK_FALSE(substation_adjacency(sys, apart).adjacent(1, 2));
}
