#include "placerank/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "placerank/ingestion.hpp"
#include "placerank/mobility_features.hpp"
#include "placerank/rng.hpp"
#include "placerank/spatial.hpp"

namespace placerank {

namespace {

constexpr std::int64_t kBaseTimestamp = 1'275'000'000;  // arbitrary epoch anchor

void validate_config(const CityConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError("city config: " + msg); };
  if (cfg.venue_count == 0 && cfg.chain.store_count == 0)
    fail("no venues to generate");
  if (cfg.box_km_x <= 0 || cfg.box_km_y <= 0) fail("box dimensions must be positive");
  if (cfg.popularity.exponent <= 1.0) fail("power-law exponent must exceed 1");
  if (cfg.popularity.max_checkins < 1) fail("max_checkins must be positive");
  if (cfg.transitions.decay_scale_m <= 0) fail("decay scale must be positive");
  if (cfg.user_count == 0) fail("need at least one user");
  for (const auto& mix : cfg.categories) {
    if (mix.name.empty()) fail("category names must be non-empty");
    if (mix.weight <= 0) fail("category weights must be positive");
  }
  if (cfg.venue_count > 0 && cfg.categories.empty())
    fail("background venues need a category mix");
  if (cfg.chain.store_count > 0 &&
      (cfg.chain.label.empty() || cfg.chain.category.empty()))
    fail("chain spec needs a label and a category");
  for (const auto& rule : cfg.colocation) {
    if (rule.fraction < 0 || rule.fraction > 1)
      fail("co-location fraction must lie in [0, 1]");
    if (rule.radius_m <= 0) fail("co-location radius must be positive");
  }
  for (const auto& term : cfg.popularity.planted)
    if (feature_slot(term.feature) < 0)
      fail("planted term references unknown feature '" + term.feature + "'");
  if (!cfg.popularity.planted.empty() && cfg.transitions.derive_from_checkins)
    fail("planted popularity requires direct transition generation");
}

struct BoxGeometry {
  LatLon origin;
  double lat_per_km = 0.0;
  double lon_per_km = 0.0;
  double km_x = 0.0, km_y = 0.0;

  LatLon to_latlon(double x_km, double y_km) const {
    return {origin.lat + y_km * lat_per_km, origin.lon + x_km * lon_per_km};
  }
};

BoxGeometry make_geometry(const CityConfig& cfg) {
  BoxGeometry g;
  g.origin = cfg.origin;
  g.km_x = cfg.box_km_x;
  g.km_y = cfg.box_km_y;
  g.lat_per_km = 1000.0 / meters_per_degree_lat();
  const double mid_lat = cfg.origin.lat + g.lat_per_km * cfg.box_km_y / 2.0;
  g.lon_per_km = 1000.0 / (meters_per_degree_lat() *
                           std::cos(mid_lat * std::numbers::pi / 180.0));
  return g;
}

std::string venue_id(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "v%05zu", i);
  return buf;
}

std::int64_t draw_power_law(Rng& rng, double exponent, std::int64_t cap) {
  // Continuous Pareto with x_min = 1 floored to an integer; the CCDF decays
  // with slope -(exponent - 1) on log-log axes.
  const double u = 1.0 - rng.uniform();  // (0, 1]
  const double value = std::pow(u, -1.0 / (exponent - 1.0));
  const double capped = std::min(value, static_cast<double>(cap));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(capped));
}

/// Samples direct transitions. Sources are drawn from the check-in multiset
/// (so a venue's outgoing transitions never exceed its check-ins);
/// destinations follow exp(-dist/scale) * affinity.
std::vector<Transition> sample_transitions(const std::vector<Venue>& venues,
                                           const std::vector<std::int64_t>& counts,
                                           const CityConfig& cfg, Rng& rng) {
  std::vector<Transition> out;
  if (cfg.transitions.count == 0 || venues.size() < 2) return out;

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < venues.size(); ++i)
    for (std::int64_t c = 0; c < counts[i]; ++c) pool.push_back(i);
  if (cfg.transitions.count > pool.size())
    throw ConfigError("transition count exceeds total check-ins (" +
                      std::to_string(pool.size()) + " available)");
  rng.shuffle(pool);

  std::vector<std::size_t> draws_per_venue(venues.size(), 0);
  for (std::size_t t = 0; t < cfg.transitions.count; ++t) ++draws_per_venue[pool[t]];

  auto affinity = [&cfg](const std::string& from, const std::string& to) {
    auto it = cfg.transitions.affinity.find({from, to});
    return it != cfg.transitions.affinity.end() ? it->second : 1.0;
  };

  std::size_t counter = 0;
  std::vector<double> cumulative(venues.size());
  for (std::size_t m = 0; m < venues.size(); ++m) {
    if (draws_per_venue[m] == 0) continue;
    double total = 0.0;
    for (std::size_t j = 0; j < venues.size(); ++j) {
      double w = 0.0;
      if (j != m) {
        const double dist = haversine_distance(venues[m].coord(), venues[j].coord());
        w = std::exp(-dist / cfg.transitions.decay_scale_m) *
            affinity(venues[m].category, venues[j].category);
      }
      total += w;
      cumulative[j] = total;
    }
    if (total <= 0.0) continue;  // nowhere to go from this venue

    for (std::size_t d = 0; d < draws_per_venue[m]; ++d) {
      const double pick = rng.uniform() * total;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
      std::size_t j = static_cast<std::size_t>(it - cumulative.begin());
      if (j >= venues.size()) j = venues.size() - 1;
      const std::int64_t t_from =
          kBaseTimestamp + static_cast<std::int64_t>(counter) * 61;
      out.push_back({venues[m].id, venues[j].id,
                     "u" + std::to_string(counter % cfg.user_count), t_from,
                     t_from + 300});
      ++counter;
    }
  }
  return out;
}

std::vector<CheckIn> materialize_checkins(const std::vector<Venue>& venues,
                                          const std::vector<std::int64_t>& counts,
                                          std::size_t user_count, Rng& rng) {
  std::vector<std::size_t> events;
  for (std::size_t i = 0; i < venues.size(); ++i)
    for (std::int64_t c = 0; c < counts[i]; ++c) events.push_back(i);
  // Shuffling makes the round-robin user trajectories hop between venues,
  // which keeps the derive-transitions path meaningful.
  rng.shuffle(events);

  std::vector<CheckIn> out;
  out.reserve(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) {
    out.push_back({"u" + std::to_string(e % user_count), venues[events[e]].id,
                   kBaseTimestamp + static_cast<std::int64_t>(e) * 7});
  }
  return out;
}

}  // namespace

Dataset generate_city(const CityConfig& cfg) {
  validate_config(cfg);
  Rng rng(cfg.seed);
  const BoxGeometry geo = make_geometry(cfg);

  // Background categories by weight.
  std::vector<std::string> background_cats;
  background_cats.reserve(cfg.venue_count);
  if (cfg.venue_count > 0) {
    double total_weight = 0.0;
    for (const auto& mix : cfg.categories) total_weight += mix.weight;
    for (std::size_t i = 0; i < cfg.venue_count; ++i) {
      double pick = rng.uniform() * total_weight;
      std::size_t chosen = cfg.categories.size() - 1;
      for (std::size_t c = 0; c < cfg.categories.size(); ++c) {
        pick -= cfg.categories[c].weight;
        if (pick < 0) {
          chosen = c;
          break;
        }
      }
      background_cats.push_back(cfg.categories[chosen].name);
    }
  }

  // Placement. Categories bound by co-location rules are deferred until
  // their anchors exist.
  std::map<std::string, const ColocationRule*> rule_of;
  for (const auto& rule : cfg.colocation) rule_of[rule.attracted] = &rule;

  std::vector<Venue> venues;
  venues.reserve(cfg.venue_count + cfg.chain.store_count);
  std::vector<std::size_t> deferred;
  for (std::size_t i = 0; i < cfg.venue_count; ++i) {
    if (rule_of.contains(background_cats[i])) {
      deferred.push_back(i);
      continue;
    }
    const LatLon pos = geo.to_latlon(rng.uniform(0, geo.km_x), rng.uniform(0, geo.km_y));
    venues.push_back({venue_id(i), pos.lat, pos.lon, background_cats[i], ""});
  }

  std::map<std::string, std::vector<LatLon>> anchors;
  for (const auto& v : venues) anchors[v.category].push_back(v.coord());

  for (std::size_t i : deferred) {
    const ColocationRule& rule = *rule_of.at(background_cats[i]);
    LatLon pos;
    const auto anchor_it = anchors.find(rule.anchor);
    if (anchor_it != anchors.end() && !anchor_it->second.empty() &&
        rng.uniform() < rule.fraction) {
      const LatLon anchor =
          anchor_it->second[rng.uniform_index(anchor_it->second.size())];
      const double radius_km = rule.radius_m / 1000.0 * std::sqrt(rng.uniform());
      const double angle = rng.uniform(0, 2 * std::numbers::pi);
      pos = {anchor.lat + radius_km * std::sin(angle) * geo.lat_per_km,
             anchor.lon + radius_km * std::cos(angle) * geo.lon_per_km};
    } else {
      pos = geo.to_latlon(rng.uniform(0, geo.km_x), rng.uniform(0, geo.km_y));
    }
    venues.push_back({venue_id(i), pos.lat, pos.lon, background_cats[i], ""});
  }

  const std::size_t chain_start = venues.size();
  for (std::size_t s = 0; s < cfg.chain.store_count; ++s) {
    const LatLon pos = geo.to_latlon(rng.uniform(0, geo.km_x), rng.uniform(0, geo.km_y));
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%04zu", s);
    venues.push_back({buf, pos.lat, pos.lon, cfg.chain.category, cfg.chain.label});
  }

  // Popularity. In planted mode chain stores start at zero check-ins; their
  // counts come from the features of the finished background structure.
  std::vector<std::int64_t> counts(venues.size(), 0);
  for (std::size_t i = 0; i < venues.size(); ++i)
    counts[i] = draw_power_law(rng, cfg.popularity.exponent, cfg.popularity.max_checkins);

  const bool planted_mode =
      !cfg.popularity.planted.empty() && cfg.chain.store_count > 0;
  if (planted_mode)
    for (std::size_t s = chain_start; s < venues.size(); ++s) counts[s] = 0;

  std::vector<Transition> transitions;
  if (!cfg.transitions.derive_from_checkins)
    transitions = sample_transitions(venues, counts, cfg, rng);

  if (planted_mode) {
    std::map<std::string, std::int64_t> count_map;
    for (std::size_t i = 0; i < venues.size(); ++i) count_map[venues[i].id] = counts[i];
    std::set<std::string> cats;
    for (const auto& v : venues) cats.insert(v.category);
    const Dataset provisional =
        Dataset::build_unchecked(venues, {}, transitions, count_map, cats);

    const double r = cfg.popularity.feature_radius_m;
    SpatialIndex index(provisional.venues(), r);
    const JensenCoefficients coeffs = jensen_coefficients(provisional, index, r);
    const TransitionTables tables = transition_tables(provisional);

    const std::size_t stores = venues.size() - chain_start;
    std::vector<std::array<double, kFeatureCount>> store_features(stores);
    for (std::size_t s = 0; s < stores; ++s) {
      const Venue& store = venues[chain_start + s];
      CandidateArea area{store.coord(), r, store.id, store.category};
      store_features[s] = feature_vector(area, provisional, index, coeffs, tables).x;
    }

    // z-score each planted feature across the chain's stores.
    std::vector<double> signal(stores, 0.0);
    for (const auto& term : cfg.popularity.planted) {
      const auto slot = static_cast<std::size_t>(feature_slot(term.feature));
      double mean = 0.0;
      for (std::size_t s = 0; s < stores; ++s) mean += store_features[s][slot];
      mean /= static_cast<double>(stores);
      double var = 0.0;
      for (std::size_t s = 0; s < stores; ++s) {
        const double delta = store_features[s][slot] - mean;
        var += delta * delta;
      }
      var /= static_cast<double>(stores);
      const double sd = std::sqrt(var);
      if (sd <= 0.0) continue;
      for (std::size_t s = 0; s < stores; ++s)
        signal[s] += term.weight * (store_features[s][slot] - mean) / sd;
    }

    for (std::size_t s = 0; s < stores; ++s) {
      double y = cfg.popularity.planted_base +
                 cfg.popularity.planted_spread * signal[s];
      if (cfg.popularity.planted_noise_sd > 0.0)
        y += cfg.popularity.planted_noise_sd * rng.normal();
      counts[chain_start + s] =
          std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(y)));
    }
  }

  std::vector<CheckIn> checkins =
      materialize_checkins(venues, counts, cfg.user_count, rng);

  if (cfg.transitions.derive_from_checkins)
    transitions = derive_transitions(checkins);

  return Dataset::build(std::move(venues), std::move(checkins), std::move(transitions));
}

}  // namespace placerank
