#include "placerank/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace placerank {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

SpatialIndex::SpatialIndex(std::span<const Venue> venues, double cell_size_m) {
  if (cell_size_m <= 0.0) cell_size_m = 200.0;
  cell_deg_lat_ = cell_size_m / meters_per_degree_lat();
  // Cell width in lon degrees is fixed at the equatorial scale; cells are
  // narrower in meters at high latitude, which only affects speed.
  cell_deg_lon_ = cell_deg_lat_;
  coords_.reserve(venues.size());
  for (std::size_t i = 0; i < venues.size(); ++i) {
    const LatLon c = venues[i].coord();
    coords_.push_back(c);
    cells_[key(cell_of_lat(c.lat), cell_of_lon(c.lon))].push_back(i);
  }
}

std::int64_t SpatialIndex::cell_of_lat(double lat) const {
  return static_cast<std::int64_t>(std::floor(lat / cell_deg_lat_));
}

std::int64_t SpatialIndex::cell_of_lon(double lon) const {
  return static_cast<std::int64_t>(std::floor(lon / cell_deg_lon_));
}

std::uint64_t SpatialIndex::key(std::int64_t row, std::int64_t col) {
  return (static_cast<std::uint64_t>(row) << 32) ^
         (static_cast<std::uint64_t>(col) & 0xFFFFFFFFULL);
}

std::vector<std::size_t> SpatialIndex::radius_query(LatLon center,
                                                    double radius_m) const {
  std::vector<std::size_t> result;
  if (coords_.empty() || radius_m <= 0.0) return result;

  // Conservative bounding box: latitude extent is exact on the sphere; the
  // longitude extent uses the smallest cosine in the disk's latitude band
  // (plus slack) so the box always contains the disk.
  const double dlat = radius_m / meters_per_degree_lat();
  const double lat_lo = center.lat - dlat;
  const double lat_hi = center.lat + dlat;
  const double worst_lat =
      std::min(std::max(std::abs(lat_lo), std::abs(lat_hi)), 90.0);
  const double cos_worst = std::cos(worst_lat * kDegToRad);

  const std::int64_t row_lo = cell_of_lat(std::max(lat_lo, -90.0));
  const std::int64_t row_hi = cell_of_lat(std::min(lat_hi, 90.0));

  auto scan_lon_interval = [&](double lon_lo, double lon_hi) {
    const std::int64_t col_lo = cell_of_lon(lon_lo);
    const std::int64_t col_hi = cell_of_lon(lon_hi);
    for (std::int64_t row = row_lo; row <= row_hi; ++row) {
      for (std::int64_t col = col_lo; col <= col_hi; ++col) {
        auto it = cells_.find(key(row, col));
        if (it == cells_.end()) continue;
        for (std::size_t idx : it->second) {
          if (haversine_distance(coords_[idx], center) < radius_m)
            result.push_back(idx);
        }
      }
    }
  };

  double dlon = 180.0;
  if (cos_worst >= 1e-9)
    dlon = 1.001 * radius_m / (meters_per_degree_lat() * cos_worst);

  if (dlon >= 180.0) {
    scan_lon_interval(-180.0, 180.0);
  } else {
    const double lon_lo = center.lon - dlon;
    const double lon_hi = center.lon + dlon;
    scan_lon_interval(std::max(lon_lo, -180.0), std::min(lon_hi, 180.0));
    // Disks straddling the antimeridian wrap onto the other edge.
    if (lon_lo < -180.0) scan_lon_interval(lon_lo + 360.0, 180.0);
    if (lon_hi > 180.0) scan_lon_interval(-180.0, lon_hi - 360.0);
  }

  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

}  // namespace placerank
