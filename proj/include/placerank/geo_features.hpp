#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "placerank/core.hpp"
#include "placerank/spatial.hpp"

namespace placerank {

using CategoryPair = std::pair<std::string, std::string>;  // (gamma_p, gamma_l)

/// Inter-category attraction coefficients at a fixed radius.
///
/// kappa[(a, b)] measures how many times more often a venue of category a is
/// found within the radius of a category-b venue than expected under uniform
/// random placement; values above 1 attract, below 1 repel. Entries exist
/// only for pairs with at least one venue of each category. baseline_mean
/// holds the mean number of category-a neighbors around venues of category b.
struct JensenCoefficients {
  double radius_m = 0.0;
  std::map<CategoryPair, double> kappa;
  std::map<CategoryPair, double> baseline_mean;
};

/// Venue indices inside the area's disk, focal venue excluded. Shared by the
/// geographic and mobility features.
std::vector<std::size_t> area_neighbors(const CandidateArea& area,
                                        const Dataset& d,
                                        const SpatialIndex& index);

/// Number of venues in the disk.
double density(const CandidateArea& area, const Dataset& d,
               const SpatialIndex& index);

/// Shannon entropy (bits) of the category mix in the disk; 0 when empty.
double entropy(const CandidateArea& area, const Dataset& d,
               const SpatialIndex& index);

/// Negated share of same-category neighbors, in [-1, 0]; 0 when the disk is
/// empty. Less competition ranks higher.
double competitiveness(const CandidateArea& area, const Dataset& d,
                       const SpatialIndex& index);

/// Computes kappa and the neighbor-count baselines for every category pair
/// present in the dataset. A venue is not its own neighbor. Per-venue terms
/// whose denominator (non-source-category neighbor count) is zero are
/// skipped.
JensenCoefficients jensen_coefficients(const Dataset& d, const SpatialIndex& index,
                                       double radius_m);

/// Sum over categories of ln(kappa) weighted by the surplus of observed
/// neighbors over the category baseline. Pairs with kappa <= 0 or missing
/// from the table contribute nothing.
double jensen_quality(const CandidateArea& area, const Dataset& d,
                      const SpatialIndex& index, const JensenCoefficients& coeffs);

}  // namespace placerank
