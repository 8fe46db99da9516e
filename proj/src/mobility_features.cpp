#include "placerank/mobility_features.hpp"

#include <stdexcept>
#include <unordered_set>

namespace placerank {

namespace {

bool touches_focal(const Transition& t, const CandidateArea& area) {
  return area.focal_venue && (t.from == *area.focal_venue || t.to == *area.focal_venue);
}

}  // namespace

double area_popularity(const CandidateArea& area, const Dataset& d,
                       const SpatialIndex& index) {
  double total = 0.0;
  for (auto idx : area_neighbors(area, d, index))
    total += static_cast<double>(d.checkins_at(idx));
  return total;
}

namespace {

std::unordered_set<std::string> in_disk_ids(const CandidateArea& area,
                                            const Dataset& d,
                                            const SpatialIndex& index) {
  std::unordered_set<std::string> ids;
  for (auto idx : area_neighbors(area, d, index))
    ids.insert(d.venues()[idx].id);
  return ids;
}

}  // namespace

double transition_density(const CandidateArea& area, const Dataset& d,
                          const SpatialIndex& index) {
  const auto inside = in_disk_ids(area, d, index);
  std::size_t count = 0;
  for (const auto& t : d.transitions()) {
    if (touches_focal(t, area)) continue;
    if (inside.contains(t.from) && inside.contains(t.to)) ++count;
  }
  return static_cast<double>(count);
}

double incoming_flow(const CandidateArea& area, const Dataset& d,
                     const SpatialIndex& index) {
  const auto inside = in_disk_ids(area, d, index);
  std::size_t count = 0;
  for (const auto& t : d.transitions()) {
    if (touches_focal(t, area)) continue;
    if (!inside.contains(t.to) || inside.contains(t.from)) continue;
    const Venue* from = d.find_venue(t.from);
    // Origins exactly on the rim are neither inside nor outside.
    if (from && haversine_distance(from->coord(), area.center) > area.radius_m)
      ++count;
  }
  return static_cast<double>(count);
}

TransitionTables transition_tables(const Dataset& d) {
  TransitionTables tables;

  // Outgoing transition counts per (venue, destination category).
  std::map<std::pair<std::string, std::string>, std::int64_t> outgoing;
  for (const auto& t : d.transitions()) {
    const Venue* to = d.find_venue(t.to);
    if (!to || !d.venue_index(t.from)) continue;
    ++outgoing[{t.from, to->category}];
  }

  // Venues with check-ins, grouped by category; these define the mean.
  std::map<std::string, std::size_t> active_venues_per_cat;
  for (const auto& v : d.venues())
    if (d.checkins_at(v.id) > 0) ++active_venues_per_cat[v.category];

  std::map<CategoryPair, double> fraction_sum;
  for (const auto& [key, count] : outgoing) {
    const auto& [venue_id, to_cat] = key;
    const Venue* from = d.find_venue(venue_id);
    const std::int64_t c_p = d.checkins_at(venue_id);
    if (c_p <= 0) continue;  // venues without check-ins are outside the mean
    fraction_sum[{from->category, to_cat}] +=
        static_cast<double>(count) / static_cast<double>(c_p);
  }

  std::map<std::string, std::size_t> venues_per_cat;
  for (const auto& v : d.venues()) ++venues_per_cat[v.category];
  const double n = static_cast<double>(d.venues().size());

  for (const auto& [pair, sum] : fraction_sum) {
    auto active_it = active_venues_per_cat.find(pair.first);
    if (active_it == active_venues_per_cat.end()) continue;
    const double sigma = sum / static_cast<double>(active_it->second);
    tables.sigma[pair] = sigma;
    const double n_from = static_cast<double>(venues_per_cat.at(pair.first));
    const double n_to = static_cast<double>(venues_per_cat.at(pair.second));
    tables.rho[pair] = sigma * (n - n_from) / (n_from * n_to);
  }
  return tables;
}

double transition_quality(const CandidateArea& area, const Dataset& d,
                          const SpatialIndex& index, const TransitionTables& tables) {
  double total = 0.0;
  for (auto idx : area_neighbors(area, d, index)) {
    const Venue& p = d.venues()[idx];
    const double sigma = tables.sigma_or_zero(p.category, area.target_category);
    total += sigma * static_cast<double>(d.checkins_at(idx));
  }
  return total;
}

FeatureVector feature_vector(const CandidateArea& area, const Dataset& d,
                             const SpatialIndex& index,
                             const JensenCoefficients& coeffs,
                             const TransitionTables& tables) {
  if (coeffs.radius_m != area.radius_m)
    throw std::invalid_argument(
        "coefficient table radius does not match the candidate area radius");

  FeatureVector fv;
  fv.area = area;
  fv.x[0] = density(area, d, index);
  fv.x[1] = entropy(area, d, index);
  fv.x[2] = competitiveness(area, d, index);
  fv.x[3] = jensen_quality(area, d, index, coeffs);
  fv.x[4] = area_popularity(area, d, index);
  fv.x[5] = transition_density(area, d, index);
  fv.x[6] = incoming_flow(area, d, index);
  fv.x[7] = transition_quality(area, d, index, tables);
  if (area.focal_venue && d.venue_index(*area.focal_venue))
    fv.y = d.checkins_at(*area.focal_venue);
  return fv;
}

}  // namespace placerank
