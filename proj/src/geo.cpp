#include "placerank/geo.hpp"

#include <cmath>
#include <numbers>

namespace placerank {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

double haversine_distance(LatLon a, LatLon b) {
  if (a.lat == b.lat && a.lon == b.lon) return 0.0;
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double sin_dphi = std::sin(dphi / 2.0);
  const double sin_dlambda = std::sin(dlambda / 2.0);
  const double h = sin_dphi * sin_dphi +
                   std::cos(phi1) * std::cos(phi2) * sin_dlambda * sin_dlambda;
  // Clamp guards against rounding pushing h past 1 for near-antipodal pairs.
  const double root = std::sqrt(h < 1.0 ? h : 1.0);
  return 2.0 * kEarthRadiusM * std::asin(root);
}

double meters_per_degree_lat() { return kEarthRadiusM * kDegToRad; }

}  // namespace placerank
