#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "placerank/core.hpp"
#include "placerank/ingestion.hpp"
#include "placerank/rng.hpp"

using namespace placerank;

namespace {

Dataset three_venue_fixture() {
  std::vector<Venue> venues = {
      fixtures::venue("v1", 0.0, 0.0, "coffee", "brandA"),
      fixtures::venue("v2", 0.001, 0.0, "food"),
      fixtures::venue("v3", 0.0, 0.002, "shop"),
  };
  std::vector<CheckIn> checkins;
  fixtures::add_checkins(checkins, "v1", 2);
  fixtures::add_checkins(checkins, "v2", 1);
  std::vector<Transition> transitions = {{"v1", "v2", "u", 100, 200}};
  return Dataset::build(std::move(venues), std::move(checkins), std::move(transitions));
}

bool has_violation(const std::vector<Violation>& violations, Violation::Kind kind,
                   const std::string& subject) {
  for (const auto& v : violations)
    if (v.kind == kind && v.subject == subject) return true;
  return false;
}

}  // namespace

TEST_CASE("well-formed fixture validates clean") {
  CHECK(validate_dataset(three_venue_fixture()).empty());
}

TEST_CASE("check-in referencing unknown venue is flagged") {
  std::vector<Venue> venues = {fixtures::venue("v1", 0, 0, "coffee")};
  std::vector<CheckIn> checkins = {{"u", "v99", 50}};
  auto d = Dataset::build(std::move(venues), std::move(checkins), {});
  auto violations = validate_dataset(d);
  REQUIRE(violations.size() == 1);
  CHECK(has_violation(violations, Violation::Kind::UnresolvedVenue, "v99"));
}

TEST_CASE("count map inconsistent with check-ins is flagged") {
  std::vector<Venue> venues = {fixtures::venue("p", 0, 0, "coffee")};
  std::vector<CheckIn> checkins;
  fixtures::add_checkins(checkins, "p", 4);
  auto d = Dataset::build_unchecked(std::move(venues), std::move(checkins), {},
                                    {{"p", 5}}, {"coffee"});
  auto violations = validate_dataset(d);
  CHECK(has_violation(violations, Violation::Kind::CountMismatch, "p"));
}

TEST_CASE("structural transition violations are flagged") {
  std::vector<Venue> venues = {fixtures::venue("a", 0, 0, "x"),
                               fixtures::venue("b", 0.001, 0, "x")};
  std::vector<Transition> transitions = {
      {"a", "a", "u", 10, 20},   // self transition
      {"a", "b", "u", 30, 20},   // arrives before departing
      {"a", "ghost", "u", 1, 2},
  };
  auto d = Dataset::build(std::move(venues), {}, std::move(transitions));
  auto violations = validate_dataset(d);
  CHECK(has_violation(violations, Violation::Kind::SelfTransition, "a"));
  CHECK(has_violation(violations, Violation::Kind::TransitionOrder, "a"));
  CHECK(has_violation(violations, Violation::Kind::UnresolvedVenue, "ghost"));
}

TEST_CASE("C_p matches the exact per-venue check-in counts") {
  Rng rng(11);
  for (int round = 0; round < 10; ++round) {
    auto d = fixtures::random_city(rng, 12, 3, 10);
    for (const auto& v : d.venues()) {
      std::int64_t direct = 0;
      for (const auto& c : d.checkins())
        if (c.venue == v.id) ++direct;
      CHECK(d.checkins_at(v.id) == direct);
    }
  }
}

TEST_CASE("dataset round-trips through the CSV formats") {
  namespace fs = std::filesystem;
  Rng rng(29);
  const auto dir = fs::temp_directory_path() / "placerank_core_roundtrip";
  fs::create_directories(dir);
  for (int round = 0; round < 5; ++round) {
    auto original = fixtures::random_city(rng, 15, 4, 12);
    write_venues(dir / "venues.csv", original.venues());
    write_checkins(dir / "checkins.csv", original.checkins());
    write_transitions(dir / "transitions.csv", original.transitions());
    auto reloaded = Dataset::build(parse_venues(dir / "venues.csv"),
                                   parse_checkins(dir / "checkins.csv"),
                                   parse_transitions(dir / "transitions.csv"));
    CHECK(original == reloaded);
  }
  fs::remove_all(dir);
}

TEST_CASE("feature slots resolve names in canonical order") {
  CHECK(feature_slot("density") == 0);
  CHECK(feature_slot("transition_quality") == 7);
  CHECK(feature_slot("no_such_feature") == -1);
}

TEST_CASE("ranked list ranks are one-based") {
  RankedList list{{"a", "b", "c"}};
  CHECK(list.rank_of("a") == 1);
  CHECK(list.rank_of("c") == 3);
  CHECK(list.rank_of("zz") == 0);
}
