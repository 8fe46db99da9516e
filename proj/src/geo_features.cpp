#include "placerank/geo_features.hpp"

#include <cmath>

namespace placerank {

std::vector<std::size_t> area_neighbors(const CandidateArea& area,
                                        const Dataset& d,
                                        const SpatialIndex& index) {
  auto hits = index.radius_query(area.center, area.radius_m);
  if (area.focal_venue) {
    auto focal_idx = d.venue_index(*area.focal_venue);
    if (focal_idx) std::erase(hits, *focal_idx);
  }
  return hits;
}

double density(const CandidateArea& area, const Dataset& d,
               const SpatialIndex& index) {
  return static_cast<double>(area_neighbors(area, d, index).size());
}

double entropy(const CandidateArea& area, const Dataset& d,
               const SpatialIndex& index) {
  auto neighbors = area_neighbors(area, d, index);
  if (neighbors.empty()) return 0.0;
  std::map<std::string, std::size_t> counts;
  for (auto idx : neighbors) ++counts[d.venues()[idx].category];
  const double total = static_cast<double>(neighbors.size());
  double h = 0.0;
  for (const auto& [category, count] : counts) {
    const double p = static_cast<double>(count) / total;
    h -= p * std::log2(p);
  }
  return h;
}

double competitiveness(const CandidateArea& area, const Dataset& d,
                       const SpatialIndex& index) {
  auto neighbors = area_neighbors(area, d, index);
  if (neighbors.empty()) return 0.0;
  std::size_t same = 0;
  for (auto idx : neighbors)
    if (d.venues()[idx].category == area.target_category) ++same;
  return -static_cast<double>(same) / static_cast<double>(neighbors.size());
}

JensenCoefficients jensen_coefficients(const Dataset& d, const SpatialIndex& index,
                                       double radius_m) {
  JensenCoefficients coeffs;
  coeffs.radius_m = radius_m;

  const auto& venues = d.venues();
  const std::size_t n = venues.size();
  if (n < 2) return coeffs;

  // Dense category indexing for the accumulation passes.
  std::vector<std::string> cats(d.categories().begin(), d.categories().end());
  const std::size_t k = cats.size();
  std::map<std::string, std::size_t> cat_idx;
  for (std::size_t i = 0; i < k; ++i) cat_idx[cats[i]] = i;

  std::vector<std::size_t> venue_cat(n);
  std::vector<std::size_t> cat_count(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    venue_cat[i] = cat_idx.at(venues[i].category);
    ++cat_count[venue_cat[i]];
  }

  // Per-venue neighbor counts by category; the venue itself is excluded.
  // ratio_sum[a][b] accumulates N_b(p,r) / (N(p,r) - N_a(p,r)) over venues p
  // of category a. neighbor_sum[a][b] accumulates N_a(p,r) over venues p of
  // category b for the baselines.
  std::vector<std::vector<double>> ratio_sum(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> neighbor_sum(k, std::vector<double>(k, 0.0));

  std::vector<std::size_t> per_cat(k, 0);
  for (std::size_t p = 0; p < n; ++p) {
    auto hits = index.radius_query(venues[p].coord(), radius_m);
    std::fill(per_cat.begin(), per_cat.end(), 0);
    std::size_t total = 0;
    for (auto idx : hits) {
      if (idx == p) continue;
      ++per_cat[venue_cat[idx]];
      ++total;
    }
    const std::size_t a = venue_cat[p];
    const double denom = static_cast<double>(total - per_cat[a]);
    for (std::size_t b = 0; b < k; ++b) {
      if (denom > 0.0)
        ratio_sum[a][b] += static_cast<double>(per_cat[b]) / denom;
      neighbor_sum[b][a] += static_cast<double>(per_cat[b]);
    }
  }

  for (std::size_t a = 0; a < k; ++a) {
    if (cat_count[a] == 0) continue;
    for (std::size_t b = 0; b < k; ++b) {
      if (cat_count[b] == 0) continue;
      const double n_a = static_cast<double>(cat_count[a]);
      const double n_b = static_cast<double>(cat_count[b]);
      const double scale =
          (static_cast<double>(n) - n_a) / (n_a * n_b);
      coeffs.kappa[{cats[a], cats[b]}] = scale * ratio_sum[a][b];
      coeffs.baseline_mean[{cats[a], cats[b]}] = neighbor_sum[a][b] / n_b;
    }
  }
  return coeffs;
}

double jensen_quality(const CandidateArea& area, const Dataset& d,
                      const SpatialIndex& index, const JensenCoefficients& coeffs) {
  auto neighbors = area_neighbors(area, d, index);
  std::map<std::string, std::size_t> counts;
  for (auto idx : neighbors) ++counts[d.venues()[idx].category];

  double quality = 0.0;
  for (const auto& [pair, kappa] : coeffs.kappa) {
    if (pair.second != area.target_category) continue;
    if (kappa <= 0.0) continue;  // never co-located; log undefined, skipped
    auto baseline_it = coeffs.baseline_mean.find(pair);
    const double baseline =
        baseline_it != coeffs.baseline_mean.end() ? baseline_it->second : 0.0;
    auto count_it = counts.find(pair.first);
    const double observed =
        count_it != counts.end() ? static_cast<double>(count_it->second) : 0.0;
    quality += std::log(kappa) * (observed - baseline);
  }
  return quality;
}

}  // namespace placerank
