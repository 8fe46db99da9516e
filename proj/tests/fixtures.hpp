#pragma once

#include <string>
#include <vector>

#include "placerank/core.hpp"
#include "placerank/rng.hpp"

namespace fixtures {

using placerank::CheckIn;
using placerank::Dataset;
using placerank::Transition;
using placerank::Venue;

// A flat test patch near the equator keeps meters-per-degree identical in
// both axes: 1 degree = ~111.19 km, so 0.001 deg = ~111.19 m.
inline constexpr double kDegM = 111'194.92664455874;

inline Venue venue(std::string id, double lat, double lon, std::string category,
                   std::string chain = "") {
  return {std::move(id), lat, lon, std::move(category), std::move(chain)};
}

/// n check-ins at a venue from distinct users, timestamps t0, t0+60, ...
inline void add_checkins(std::vector<CheckIn>& out, const std::string& venue_id,
                         int n, std::int64_t t0 = 1'000'000) {
  for (int i = 0; i < n; ++i)
    out.push_back({"user_" + venue_id + "_" + std::to_string(i), venue_id,
                   t0 + 60 * i});
}

/// Random small dataset for oracle-equivalence runs: venues scattered in a
/// ~2 x 2 km patch, random check-in counts, random transitions.
inline Dataset random_city(placerank::Rng& rng, std::size_t venue_count,
                           std::size_t categories, std::size_t transition_count) {
  std::vector<Venue> venues;
  for (std::size_t i = 0; i < venue_count; ++i) {
    venues.push_back(venue(
        "v" + std::to_string(i), rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01),
        "cat" + std::to_string(rng.uniform_index(categories))));
  }
  std::vector<CheckIn> checkins;
  for (std::size_t i = 0; i < venue_count; ++i)
    add_checkins(checkins, venues[i].id,
                 static_cast<int>(rng.uniform_index(6)));  // 0..5 each
  std::vector<Transition> transitions;
  if (venue_count >= 2) {
    for (std::size_t t = 0; t < transition_count; ++t) {
      const auto a = rng.uniform_index(venue_count);
      auto b = rng.uniform_index(venue_count);
      if (a == b) continue;
      const std::int64_t t0 = 2'000'000 + static_cast<std::int64_t>(t) * 100;
      transitions.push_back({venues[a].id, venues[b].id,
                             "tu" + std::to_string(t % 7), t0, t0 + 120});
    }
  }
  return Dataset::build(std::move(venues), std::move(checkins),
                        std::move(transitions));
}

}  // namespace fixtures
