#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "placerank/core.hpp"
#include "placerank/geo_features.hpp"

namespace placerank {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct CategoryMix {
  std::string name;
  double weight = 1.0;
};

struct ChainSpec {
  std::string label;
  std::size_t store_count = 0;
  std::string category;
};

/// Places a fraction of the attracted category's venues inside a disk
/// around a random venue of the anchor category, planting co-location
/// structure the coefficient tables can recover.
struct ColocationRule {
  std::string attracted;
  std::string anchor;
  double fraction = 0.5;
  double radius_m = 150.0;
};

struct PlantedTerm {
  std::string feature;  // canonical feature name
  double weight = 1.0;
};

struct PopularityModel {
  /// Power-law density exponent for check-in counts (> 1): p(c) ~ c^-exponent.
  double exponent = 2.0;
  std::int64_t max_checkins = 100000;
  /// When non-empty, chain-store popularity becomes a monotone function of
  /// these features (z-scored across the chain's stores) instead of a
  /// power-law draw. Background venues always draw from the power law.
  std::vector<PlantedTerm> planted;
  double planted_base = 500.0;
  double planted_spread = 150.0;
  double planted_noise_sd = 0.0;
  double feature_radius_m = 200.0;
};

struct TransitionModel {
  /// Number of transitions in direct mode. Each transition consumes one
  /// check-in at its origin, so per-venue outgoing counts never exceed C_p.
  std::size_t count = 0;
  double decay_scale_m = 300.0;
  /// Destination choice multiplier per (source category, destination
  /// category); absent pairs weigh 1.
  std::map<CategoryPair, double> affinity;
  /// When true, transitions are derived from the materialized check-in
  /// sequences instead of sampled directly; count/decay/affinity are ignored.
  bool derive_from_checkins = false;
};

struct CityConfig {
  LatLon origin{40.70, -74.02};  // south-west corner
  double box_km_x = 10.0;
  double box_km_y = 10.0;
  std::size_t venue_count = 1000;  // background venues, chain stores extra
  std::vector<CategoryMix> categories;
  ChainSpec chain;
  std::vector<ColocationRule> colocation;
  PopularityModel popularity;
  TransitionModel transitions;
  std::size_t user_count = 200;
  std::uint64_t seed = 1;
};

/// Deterministic synthetic city. Venues are uniform in the box unless a
/// co-location rule applies; check-in counts follow the popularity model;
/// transitions are sampled with probability proportional to
/// exp(-distance / decay_scale) times the category affinity.
Dataset generate_city(const CityConfig& config);

}  // namespace placerank
