#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "placerank/geo.hpp"

namespace placerank {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownChainError : public Error {
 public:
  explicit UnknownChainError(const std::string& chain)
      : Error("unknown chain: " + chain) {}
};

struct Venue {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
  std::string category;
  std::string chain;  // empty = not part of a chain

  LatLon coord() const { return {lat, lon}; }
  bool operator==(const Venue&) const = default;
};

struct CheckIn {
  std::string user;
  std::string venue;
  std::int64_t timestamp = 0;  // seconds since epoch, UTC

  bool operator==(const CheckIn&) const = default;
  auto operator<=>(const CheckIn&) const = default;
};

/// A user's move between two distinct venues, inferred from consecutive
/// check-ins. t_to >= t_from and from != to always hold for valid data.
struct Transition {
  std::string from;
  std::string to;
  std::string user;
  std::int64_t t_from = 0;
  std::int64_t t_to = 0;

  bool operator==(const Transition&) const = default;
  auto operator<=>(const Transition&) const = default;
};

/// Immutable world all features read: venues P, check-ins C, transitions T,
/// the category set and per-venue check-in counts C_p. Safe for concurrent
/// reads once built.
class Dataset {
 public:
  Dataset() = default;

  /// Builds a dataset, deriving per-venue counts and the category set.
  static Dataset build(std::vector<Venue> venues, std::vector<CheckIn> checkins,
                       std::vector<Transition> transitions);

  /// Builds with explicit counts/categories, bypassing derivation. Exists so
  /// validate_dataset can be exercised against inconsistent inputs.
  static Dataset build_unchecked(std::vector<Venue> venues,
                                 std::vector<CheckIn> checkins,
                                 std::vector<Transition> transitions,
                                 std::map<std::string, std::int64_t> checkin_counts,
                                 std::set<std::string> categories);

  const std::vector<Venue>& venues() const { return venues_; }
  const std::vector<CheckIn>& checkins() const { return checkins_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::set<std::string>& categories() const { return categories_; }
  const std::map<std::string, std::int64_t>& checkin_counts() const {
    return checkin_counts_;
  }

  std::optional<std::size_t> venue_index(std::string_view id) const;
  const Venue* find_venue(std::string_view id) const;

  /// C_p for a venue id; 0 for ids absent from the count map.
  std::int64_t checkins_at(std::string_view venue_id) const;
  std::int64_t checkins_at(std::size_t venue_idx) const {
    return counts_by_index_[venue_idx];
  }

  std::int64_t total_checkins() const { return total_checkins_; }

  /// Venue indices belonging to a chain, in dataset order.
  std::vector<std::size_t> chain_venues(std::string_view chain) const;

  bool operator==(const Dataset& other) const;

 private:
  std::vector<Venue> venues_;
  std::vector<CheckIn> checkins_;
  std::vector<Transition> transitions_;
  std::set<std::string> categories_;
  std::map<std::string, std::int64_t> checkin_counts_;
  std::vector<std::int64_t> counts_by_index_;
  std::unordered_map<std::string, std::size_t> index_by_id_;
  std::int64_t total_checkins_ = 0;

  void finish_build();
};

/// A disk of radius_m around center, evaluated counterfactually: when
/// focal_venue is set, that venue and its check-ins/transitions are
/// invisible to every feature.
struct CandidateArea {
  LatLon center;
  double radius_m = 200.0;
  std::optional<std::string> focal_venue;
  std::string target_category;
};

inline constexpr std::size_t kFeatureCount = 8;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "density",           "entropy",       "competitiveness",
    "jensen_quality",    "area_popularity", "transition_density",
    "incoming_flow",     "transition_quality"};

/// Slot index for a feature name, or -1 if unknown.
int feature_slot(std::string_view name);

struct FeatureVector {
  CandidateArea area;
  std::array<double, kFeatureCount> x{};
  std::optional<std::int64_t> y;  // ground-truth check-ins of the focal store
};

/// A permutation of a candidate set; rank(ids[i]) == i + 1.
struct RankedList {
  std::vector<std::string> ids;

  std::size_t size() const { return ids.size(); }

  /// 1-based rank of an id, or 0 if absent.
  std::size_t rank_of(std::string_view id) const;

  bool operator==(const RankedList&) const = default;
};

struct Violation {
  enum class Kind {
    UnresolvedVenue,
    CountMismatch,
    DuplicateVenueId,
    EmptyCategory,
    CoordinateOutOfRange,
    CategorySetMismatch,
    TransitionOrder,
    SelfTransition,
  };
  Kind kind;
  std::string subject;  // offending id
  std::string detail;
};

std::string to_string(Violation::Kind kind);

/// Checks every Dataset invariant; returns one entry per violation found.
/// Violations are data, not failures: an empty result means the dataset
/// is well formed.
std::vector<Violation> validate_dataset(const Dataset& d);

}  // namespace placerank
