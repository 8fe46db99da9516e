#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "placerank/mobility_features.hpp"
#include "placerank/rng.hpp"

using namespace placerank;

namespace {

CandidateArea area_at(double lat, double lon, double r,
                      const std::string& target = "coffee") {
  CandidateArea a;
  a.center = {lat, lon};
  a.radius_m = r;
  a.target_category = target;
  return a;
}

/// v_in inside the disk at (0,0,r=200), v_out well outside.
Dataset flow_fixture() {
  std::vector<Venue> venues = {
      fixtures::venue("in1", 0.0005, 0, "shop"), fixtures::venue("in2", 0, 0.0005, "shop"),
      fixtures::venue("out1", 0.05, 0, "shop"), fixtures::venue("out2", 0, 0.05, "shop")};
  std::vector<Transition> transitions = {
      {"out1", "in1", "u", 0, 10},   // inbound
      {"out2", "in2", "u", 0, 10},   // inbound
      {"in1", "out1", "u", 0, 10},   // outbound
      {"in1", "in2", "u", 0, 10},    // interior
  };
  return Dataset::build(std::move(venues), {}, std::move(transitions));
}

}  // namespace

TEST_CASE("area popularity sums disk check-ins") {
  SUBCASE("empty disk") {
    auto d = Dataset::build({fixtures::venue("far", 0.05, 0, "x")}, {}, {});
    SpatialIndex index(d.venues());
    CHECK(area_popularity(area_at(0, 0, 200), d, index) == 0.0);
  }
  SUBCASE("two venues with 3 and 7 check-ins") {
    std::vector<Venue> venues = {fixtures::venue("a", 0.0005, 0, "x"),
                                 fixtures::venue("b", 0, 0.0005, "x")};
    std::vector<CheckIn> checkins;
    fixtures::add_checkins(checkins, "a", 3);
    fixtures::add_checkins(checkins, "b", 7);
    auto d = Dataset::build(std::move(venues), std::move(checkins), {});
    SpatialIndex index(d.venues());
    CHECK(area_popularity(area_at(0, 0, 200), d, index) == 10.0);
  }
}

TEST_CASE("transition density counts fully interior transitions") {
  auto d = flow_fixture();
  SpatialIndex index(d.venues());
  CHECK(transition_density(area_at(0, 0, 200, "shop"), d, index) == 1.0);
}

TEST_CASE("incoming flow counts transitions entering the disk") {
  auto d = flow_fixture();
  SpatialIndex index(d.venues());
  CHECK(incoming_flow(area_at(0, 0, 200, "shop"), d, index) == 2.0);
}

TEST_CASE("all-interior transitions produce zero incoming flow") {
  std::vector<Venue> venues = {fixtures::venue("a", 0.0002, 0, "x"),
                               fixtures::venue("b", 0, 0.0002, "x")};
  std::vector<Transition> transitions = {{"a", "b", "u", 0, 5},
                                         {"b", "a", "u", 6, 9}};
  auto d = Dataset::build(std::move(venues), {}, std::move(transitions));
  SpatialIndex index(d.venues());
  CHECK(incoming_flow(area_at(0, 0, 200), d, index) == 0.0);
  CHECK(transition_density(area_at(0, 0, 200), d, index) == 2.0);
}

TEST_CASE("density and incoming flow never count the same transition") {
  Rng rng(808);
  for (int round = 0; round < 10; ++round) {
    auto d = fixtures::random_city(rng, 20, 2, 30);
    SpatialIndex index(d.venues());
    auto area = area_at(rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01),
                        rng.uniform(100, 1500));
    // predicates partition transitions, so the counts are bounded
    CHECK(transition_density(area, d, index) + incoming_flow(area, d, index) <=
          static_cast<double>(d.transitions().size()));
    CHECK(transition_density(area, d, index) ==
          oracle::transition_density(d, area));
    CHECK(incoming_flow(area, d, index) == oracle::incoming_flow(d, area));
  }
}

TEST_CASE("sigma from a single source venue") {
  std::vector<Venue> venues = {fixtures::venue("p", 0, 0, "P"),
                               fixtures::venue("l1", 0.001, 0, "L"),
                               fixtures::venue("l2", 0.002, 0, "L")};
  std::vector<CheckIn> checkins;
  fixtures::add_checkins(checkins, "p", 10);
  std::vector<Transition> transitions = {{"p", "l1", "u", 0, 10},
                                         {"p", "l2", "u", 20, 30}};
  auto d = Dataset::build(std::move(venues), std::move(checkins), std::move(transitions));
  auto tables = transition_tables(d);
  CHECK(tables.sigma_or_zero("P", "L") == doctest::Approx(0.2));
  // rho = sigma * (N - N_P) / (N_P * N_L) = 0.2 * 2 / 2 = 0.2
  CHECK(tables.rho.at({"P", "L"}) == doctest::Approx(0.2));
}

TEST_CASE("no transitions means sigma reads zero everywhere") {
  std::vector<Venue> venues = {fixtures::venue("a", 0, 0, "A"),
                               fixtures::venue("b", 0.001, 0, "B")};
  std::vector<CheckIn> checkins;
  fixtures::add_checkins(checkins, "a", 2);
  auto d = Dataset::build(std::move(venues), std::move(checkins), {});
  auto tables = transition_tables(d);
  CHECK(tables.sigma.empty());
  CHECK(tables.sigma_or_zero("A", "B") == 0.0);
}

TEST_CASE("eight-venue fixture matches the per-venue enumeration oracle") {
  Rng rng(606);
  for (int round = 0; round < 10; ++round) {
    auto d = fixtures::random_city(rng, 8, 3, 14);
    auto tables = transition_tables(d);
    auto expected = oracle::sigma_table(d);
    REQUIRE(tables.sigma.size() == expected.sigma.size());
    for (const auto& [pair, sigma] : tables.sigma) {
      CHECK(sigma == doctest::Approx(expected.sigma.at(pair)).epsilon(1e-12));
      CHECK(tables.rho.at(pair) ==
            doctest::Approx(expected.rho.at(pair)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sigma values are probabilities and per-venue fractions sum to one or less") {
  Rng rng(707);
  for (int round = 0; round < 8; ++round) {
    auto d = fixtures::random_city(rng, 15, 3, 20);
    auto tables = transition_tables(d);
    for (const auto& [pair, sigma] : tables.sigma) {
      CHECK(sigma >= 0.0);
      CHECK(sigma <= 1.0);
    }
    // Per source venue: outgoing transitions <= check-ins would bound the
    // fraction sum by 1; random fixtures may exceed per-venue check-ins, so
    // check the exact per-venue fraction sums instead on derived data.
    auto derived = derive_transitions(d.checkins());
    auto d2 = Dataset::build(d.venues(), d.checkins(), derived);
    for (const auto& v : d2.venues()) {
      const double c_p = static_cast<double>(d2.checkins_at(v.id));
      if (c_p <= 0) continue;
      double outgoing = 0.0;
      for (const auto& t : d2.transitions())
        if (t.from == v.id) outgoing += 1.0;
      CHECK(outgoing / c_p <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("transition quality weights disk check-ins by sigma") {
  SUBCASE("single neighbor with sigma 0.1 and 50 check-ins") {
    std::vector<Venue> venues = {fixtures::venue("p", 0.0005, 0, "P")};
    std::vector<CheckIn> checkins;
    fixtures::add_checkins(checkins, "p", 50);
    auto d = Dataset::build(std::move(venues), std::move(checkins), {});
    SpatialIndex index(d.venues());
    TransitionTables tables;
    tables.sigma[{"P", "coffee"}] = 0.1;
    CHECK(transition_quality(area_at(0, 0, 200), d, index, tables) ==
          doctest::Approx(5.0));
  }
  SUBCASE("all sigma zero") {
    std::vector<Venue> venues = {fixtures::venue("p", 0.0005, 0, "P")};
    std::vector<CheckIn> checkins;
    fixtures::add_checkins(checkins, "p", 50);
    auto d = Dataset::build(std::move(venues), std::move(checkins), {});
    SpatialIndex index(d.venues());
    CHECK(transition_quality(area_at(0, 0, 200), d, index, TransitionTables{}) == 0.0);
  }
}

TEST_CASE("feature vector in an empty city is all zeros") {
  auto d = Dataset::build({fixtures::venue("store", 0, 0, "coffee")}, {}, {});
  SpatialIndex index(d.venues());
  JensenCoefficients coeffs;
  coeffs.radius_m = 200.0;
  auto area = area_at(0, 0, 200);
  area.focal_venue = "store";
  auto fv = feature_vector(area, d, index, coeffs, TransitionTables{});
  for (double x : fv.x) CHECK(x == 0.0);
  CHECK(fv.y == 0);
}

TEST_CASE("feature vector slots equal the standalone operations") {
  Rng rng(909);
  for (int round = 0; round < 8; ++round) {
    auto d = fixtures::random_city(rng, 18, 3, 25);
    SpatialIndex index(d.venues(), 300.0);
    auto coeffs = jensen_coefficients(d, index, 350.0);
    auto tables = transition_tables(d);
    const Venue& focal = d.venues()[rng.uniform_index(d.venues().size())];
    auto area = area_at(focal.lat, focal.lon, 350.0, "cat0");
    area.focal_venue = focal.id;
    auto fv = feature_vector(area, d, index, coeffs, tables);
    CHECK(fv.x[0] == density(area, d, index));
    CHECK(fv.x[1] == entropy(area, d, index));
    CHECK(fv.x[2] == competitiveness(area, d, index));
    CHECK(fv.x[3] == jensen_quality(area, d, index, coeffs));
    CHECK(fv.x[4] == area_popularity(area, d, index));
    CHECK(fv.x[5] == transition_density(area, d, index));
    CHECK(fv.x[6] == incoming_flow(area, d, index));
    CHECK(fv.x[7] == transition_quality(area, d, index, tables));
    CHECK(fv.y == d.checkins_at(focal.id));
  }
}

TEST_CASE("mismatched coefficient radius is rejected") {
  auto d = Dataset::build({fixtures::venue("store", 0, 0, "coffee")}, {}, {});
  SpatialIndex index(d.venues());
  JensenCoefficients coeffs;
  coeffs.radius_m = 150.0;
  CHECK_THROWS_AS(
      feature_vector(area_at(0, 0, 200), d, index, coeffs, TransitionTables{}),
      std::invalid_argument);
}

TEST_CASE("focal check-ins drive y but no feature slot") {
  // Same city twice, differing only in the focal venue's own check-ins.
  auto build = [](int focal_checkins) {
    std::vector<Venue> venues = {fixtures::venue("store", 0, 0, "coffee"),
                                 fixtures::venue("n1", 0.0005, 0, "shop"),
                                 fixtures::venue("n2", 0, 0.0005, "bar")};
    std::vector<CheckIn> checkins;
    fixtures::add_checkins(checkins, "store", focal_checkins);
    fixtures::add_checkins(checkins, "n1", 4);
    fixtures::add_checkins(checkins, "n2", 6);
    std::vector<Transition> transitions = {{"n1", "n2", "u", 0, 9},
                                           {"store", "n1", "u", 10, 19},
                                           {"n2", "store", "u", 20, 29}};
    return Dataset::build(std::move(venues), std::move(checkins), std::move(transitions));
  };
  auto d5 = build(5);
  auto d9 = build(9);
  SpatialIndex i5(d5.venues()), i9(d9.venues());
  auto c5 = jensen_coefficients(d5, i5, 200.0);
  auto c9 = jensen_coefficients(d9, i9, 200.0);
  auto area = area_at(0, 0, 200);
  area.focal_venue = "store";
  auto f5 = feature_vector(area, d5, i5, c5, transition_tables(d5));
  auto f9 = feature_vector(area, d9, i9, c9, transition_tables(d9));
  CHECK(f5.y == 5);
  CHECK(f9.y == 9);
  for (std::size_t slot = 0; slot < kFeatureCount; ++slot) {
    INFO("slot " << slot);
    CHECK(f5.x[slot] == doctest::Approx(f9.x[slot]).epsilon(1e-12));
  }
}

TEST_CASE("mobility features equal brute force on random fixtures") {
  Rng rng(1111);
  for (int round = 0; round < 15; ++round) {
    auto d = fixtures::random_city(rng, 5 + rng.uniform_index(25), 3, 30);
    SpatialIndex index(d.venues(), 250.0);
    auto area = area_at(rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01),
                        rng.uniform(100.0, 1200.0), "cat1");
    if (rng.uniform() < 0.5) {
      const Venue& focal = d.venues()[rng.uniform_index(d.venues().size())];
      area.center = focal.coord();
      area.focal_venue = focal.id;
    }
    CHECK(area_popularity(area, d, index) == oracle::area_popularity(d, area));
    CHECK(transition_density(area, d, index) == oracle::transition_density(d, area));
    CHECK(incoming_flow(area, d, index) == oracle::incoming_flow(d, area));
    auto tables = transition_tables(d);
    oracle::SigmaTable otab = oracle::sigma_table(d);
    CHECK(transition_quality(area, d, index, tables) ==
          doctest::Approx(oracle::transition_quality(d, area, otab)).epsilon(1e-9));
  }
}
