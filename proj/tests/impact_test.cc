#include <doctest.h>

#include <cmath>

#include "subdiv/error.h"
#include "subdiv/impact.h"
#include "subdiv/random.h"
#include "subdiv/text.h"
#include "support.h"

using namespace subdiv;

namespace {

// P_total that makes the sub-5 row (p_lol 11.2, l_star 1.8) give gamma 0.105.
const double kPTotal = 11.2 / std::pow(0.105, 1.0 / 0.8);

std::vector<SubstationProfile> ieee14_profiles(double threshold = 0.25) {
  auto p = load_impact_csv(text::read_file(testing::data_path("ieee14/impact.csv")), kPTotal);
  return classify(std::move(p), {threshold, kPTotal});
}

std::set<int> his_of(const std::vector<SubstationProfile>& profiles) {
  std::set<int> out;
  for (const auto& p : profiles)
    if (p.impact_class == ImpactClass::kHigh) out.insert(p.substation_id);
  return out;
}

}  // namespace

TEST_CASE("impact_factor") {
  CHECK(impact_factor(5.0, kPTotal, 1.0) == 1.0);
  CHECK(impact_factor(0.0, 100.0, 1.0) == 1.0);
  CHECK(impact_factor(0.0, 100.0, 2.0) == 0.0);
  CHECK(impact_factor(94.24, 187.4, 3.059) == doctest::Approx(0.2427).epsilon(0.005 / 0.2427));
  CHECK(impact_factor(11.2, kPTotal, 1.8) == doctest::Approx(0.105).epsilon(1e-12));
  CHECK(kPTotal == doctest::Approx(187.3835).epsilon(1e-6));
}

TEST_CASE("impact_factor domain errors") {
  CHECK_THROWS_AS(impact_factor(200.0, 100.0, 2.0), DomainError);
  CHECK_THROWS_AS(impact_factor(10.0, 100.0, 0.5), DomainError);
  CHECK_THROWS_AS(impact_factor(-1.0, 100.0, 2.0), DomainError);
  CHECK_THROWS_AS(impact_factor(1.0, 0.0, 2.0), DomainError);
}

TEST_CASE("impact_factor is monotone in p_lol and l_star") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const double total = 10.0 + 500.0 * rng.unit();
    const double a = total * rng.unit() * 0.999, b = total * rng.unit() * 0.999;
    const double l1 = 1.0 + 3.0 * rng.unit(), l2 = 1.0 + 3.0 * rng.unit();
    const double lo = std::min(a, b), hi = std::max(a, b);
    CHECK(impact_factor(lo, total, l1) <= impact_factor(hi, total, l1));
    const double gl = impact_factor(hi, total, std::min(l1, l2));
    const double gh = impact_factor(hi, total, std::max(l1, l2));
    CHECK(gh <= gl);
    CHECK(gh >= 0.0);
    CHECK(gl <= 1.0);
  }
}

TEST_CASE("classify uses a strict threshold") {
  std::vector<SubstationProfile> p = {{1, 1.0, std::nullopt, 0.25},
                                      {2, 1.0, std::nullopt, 0.2500001},
                                      {3, 1.0, std::nullopt, 0.0}};
  p = classify(p, {0.25, 10.0});
  CHECK(p[0].impact_class == ImpactClass::kLow);
  CHECK(p[1].impact_class == ImpactClass::kHigh);
  CHECK(p[2].impact_class == ImpactClass::kLow);

  std::vector<SubstationProfile> zeros = {{1, 0.0, 2.0, 0.0}, {2, 0.0, 2.0, 0.0}};
  CHECK(his_of(classify(zeros, {0.25, 10.0})).empty());
}

TEST_CASE("classification of the IEEE-14 impact data") {
  CHECK(his_of(ieee14_profiles(0.9999)) == std::set<int>{2, 4});
  CHECK(his_of(ieee14_profiles(0.10)) == std::set<int>{2, 3, 4, 5});
  // Sub 3 computes to 0.2428, below the 0.25 cut.
  CHECK(his_of(ieee14_profiles(0.25)) == std::set<int>{2, 4});
  CHECK(find_profile(ieee14_profiles(), 2)->highest_criticality());
}

TEST_CASE("ImpactConfig validation") {
  CHECK_THROWS_AS((ImpactConfig{0.0, 10.0}.validate()), InputError);
  CHECK_THROWS_AS((ImpactConfig{1.0, 10.0}.validate()), InputError);
  CHECK_THROWS_AS((ImpactConfig{0.5, 0.0}.validate()), InputError);
  CHECK_NOTHROW((ImpactConfig{0.5, 10.0}.validate()));
}

TEST_CASE("total_loss_of_load") {
  const auto p = ieee14_profiles();
  CHECK(total_loss_of_load({}, p) == 0.0);
  CHECK(total_loss_of_load({1, 5, 2}, p) == doctest::Approx(16.70));
  CHECK(total_loss_of_load({1, 2, 3, 4, 5}, p) == doctest::Approx(140.44));
  CHECK_THROWS_AS(total_loss_of_load({42}, p), InputError);
}

TEST_CASE("load_impact_csv layouts and errors") {
  const auto given = load_impact_csv("substation_id,gamma,p_lol_mw\n2,0.5,3\n1,1.0,4\n", std::nullopt);
  REQUIRE(given.size() == 2);
  CHECK(given[0].substation_id == 1);
  CHECK(given[0].gamma == 1.0);
  CHECK_FALSE(given[0].l_star.has_value());

  const auto computed = load_impact_csv("substation_id,p_lol_mw,l_star\n1,50,2\n", 100.0);
  CHECK(computed[0].gamma == doctest::Approx(0.5));

  CHECK_THROWS_AS(load_impact_csv("", 100.0), InputError);
  CHECK_THROWS_AS(load_impact_csv("substation_id,p_lol_mw,l_star\n", 100.0), InputError);
  CHECK_THROWS_AS(load_impact_csv("substation_id,p_lol_mw,l_star\n1,5,2\n1,6,2\n", 100.0),
                  InputError);
  CHECK_THROWS_AS(load_impact_csv("id,what\n1,2\n", 100.0), InputError);
  CHECK_THROWS_AS(load_impact_csv("substation_id,p_lol_mw,l_star\n1,5,2\n", std::nullopt),
                  InputError);
  CHECK_THROWS_AS(load_impact_csv("substation_id,p_lol_mw,l_star\n1,500,2\n", 100.0), InputError);
}
