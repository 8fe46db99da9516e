#pragma once

namespace placerank {

struct LatLon {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Great-circle distance between two coordinates, in meters.
/// Symmetric, non-negative, zero iff the points coincide.
double haversine_distance(LatLon a, LatLon b);

/// Meters spanned by one degree of latitude on the model sphere.
double meters_per_degree_lat();

}  // namespace placerank
