#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "placerank/core.hpp"

namespace placerank {

/// Uniform lat/lon grid over venue coordinates. Queries walk the cells
/// covering a conservative bounding box of the disk and filter with exact
/// haversine distances, so results match a linear scan: strictly
/// dist(p, center) < radius, no false positives or negatives.
class SpatialIndex {
 public:
  SpatialIndex() = default;

  /// cell_size_m tunes cell granularity only; correctness is independent
  /// of it. Venue order is preserved through the stored indices.
  explicit SpatialIndex(std::span<const Venue> venues, double cell_size_m = 200.0);

  /// Indices (into the venue span used at build) of venues with
  /// dist < radius_m, sorted ascending.
  std::vector<std::size_t> radius_query(LatLon center, double radius_m) const;

  std::size_t size() const { return coords_.size(); }

 private:
  std::int64_t cell_of_lat(double lat) const;
  std::int64_t cell_of_lon(double lon) const;
  static std::uint64_t key(std::int64_t row, std::int64_t col);

  std::vector<LatLon> coords_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
  double cell_deg_lat_ = 0.0;
  double cell_deg_lon_ = 0.0;
};

}  // namespace placerank
