#pragma once

#include <map>
#include <string>
#include <utility>

#include "placerank/core.hpp"
#include "placerank/geo_features.hpp"
#include "placerank/spatial.hpp"

namespace placerank {

/// Category-to-category movement tables.
///
/// sigma[(a, b)] is the mean fraction of a category-a venue's check-ins that
/// are followed by a move to a category-b venue; the mean runs over venues
/// with at least one check-in. rho normalizes sigma by the random-transition
/// expectation for the pair. Pairs never observed are simply absent and read
/// as zero.
struct TransitionTables {
  std::map<CategoryPair, double> sigma;
  std::map<CategoryPair, double> rho;

  double sigma_or_zero(const std::string& from_cat, const std::string& to_cat) const {
    auto it = sigma.find({from_cat, to_cat});
    return it != sigma.end() ? it->second : 0.0;
  }
};

/// Total check-ins at venues inside the disk (focal venue excluded).
double area_popularity(const CandidateArea& area, const Dataset& d,
                       const SpatialIndex& index);

/// Transitions with both endpoints strictly inside the disk; transitions
/// touching the focal venue are invisible.
double transition_density(const CandidateArea& area, const Dataset& d,
                          const SpatialIndex& index);

/// Transitions entering the disk from strictly outside (dist > r to the
/// origin, dist < r to the destination).
double incoming_flow(const CandidateArea& area, const Dataset& d,
                     const SpatialIndex& index);

/// Builds sigma and rho from the dataset's transitions and check-in counts.
TransitionTables transition_tables(const Dataset& d);

/// Sum of sigma[(category(p), target)] * C_p over venues p in the disk.
double transition_quality(const CandidateArea& area, const Dataset& d,
                          const SpatialIndex& index, const TransitionTables& tables);

/// Assembles all eight features in canonical slot order plus the ground
/// truth y (the focal venue's check-in count, when a focal venue is set).
/// The focal venue, its check-ins and its transitions are excluded from
/// every slot. Throws if coeffs were computed at a different radius.
FeatureVector feature_vector(const CandidateArea& area, const Dataset& d,
                             const SpatialIndex& index,
                             const JensenCoefficients& coeffs,
                             const TransitionTables& tables);

}  // namespace placerank
