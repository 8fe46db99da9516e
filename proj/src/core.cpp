#include "placerank/core.hpp"

#include <algorithm>

namespace placerank {

Dataset Dataset::build(std::vector<Venue> venues, std::vector<CheckIn> checkins,
                       std::vector<Transition> transitions) {
  Dataset d;
  d.venues_ = std::move(venues);
  d.checkins_ = std::move(checkins);
  d.transitions_ = std::move(transitions);
  for (const auto& v : d.venues_) {
    d.categories_.insert(v.category);
    d.checkin_counts_.emplace(v.id, 0);
  }
  for (const auto& c : d.checkins_) {
    auto it = d.checkin_counts_.find(c.venue);
    if (it != d.checkin_counts_.end()) ++it->second;
  }
  d.finish_build();
  return d;
}

Dataset Dataset::build_unchecked(std::vector<Venue> venues,
                                 std::vector<CheckIn> checkins,
                                 std::vector<Transition> transitions,
                                 std::map<std::string, std::int64_t> checkin_counts,
                                 std::set<std::string> categories) {
  Dataset d;
  d.venues_ = std::move(venues);
  d.checkins_ = std::move(checkins);
  d.transitions_ = std::move(transitions);
  d.checkin_counts_ = std::move(checkin_counts);
  d.categories_ = std::move(categories);
  d.finish_build();
  return d;
}

void Dataset::finish_build() {
  index_by_id_.reserve(venues_.size());
  counts_by_index_.resize(venues_.size(), 0);
  for (std::size_t i = 0; i < venues_.size(); ++i) {
    index_by_id_.emplace(venues_[i].id, i);  // first occurrence wins
    auto it = checkin_counts_.find(venues_[i].id);
    counts_by_index_[i] = it != checkin_counts_.end() ? it->second : 0;
  }
  total_checkins_ = 0;
  for (const auto& [id, n] : checkin_counts_) total_checkins_ += n;
}

std::optional<std::size_t> Dataset::venue_index(std::string_view id) const {
  auto it = index_by_id_.find(std::string(id));
  if (it == index_by_id_.end()) return std::nullopt;
  return it->second;
}

const Venue* Dataset::find_venue(std::string_view id) const {
  auto idx = venue_index(id);
  return idx ? &venues_[*idx] : nullptr;
}

std::int64_t Dataset::checkins_at(std::string_view venue_id) const {
  auto it = checkin_counts_.find(std::string(venue_id));
  return it != checkin_counts_.end() ? it->second : 0;
}

std::vector<std::size_t> Dataset::chain_venues(std::string_view chain) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < venues_.size(); ++i)
    if (venues_[i].chain == chain) out.push_back(i);
  return out;
}

bool Dataset::operator==(const Dataset& other) const {
  auto sorted_venues = [](const std::vector<Venue>& vs) {
    auto copy = vs;
    std::sort(copy.begin(), copy.end(),
              [](const Venue& a, const Venue& b) { return a.id < b.id; });
    return copy;
  };
  auto sorted = [](auto items) {
    std::sort(items.begin(), items.end());
    return items;
  };
  return sorted_venues(venues_) == sorted_venues(other.venues_) &&
         sorted(checkins_) == sorted(other.checkins_) &&
         sorted(transitions_) == sorted(other.transitions_) &&
         categories_ == other.categories_ &&
         checkin_counts_ == other.checkin_counts_;
}

int feature_slot(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i)
    if (kFeatureNames[i] == name) return static_cast<int>(i);
  return -1;
}

std::size_t RankedList::rank_of(std::string_view id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return i + 1;
  return 0;
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::UnresolvedVenue: return "UnresolvedVenue";
    case Violation::Kind::CountMismatch: return "CountMismatch";
    case Violation::Kind::DuplicateVenueId: return "DuplicateVenueId";
    case Violation::Kind::EmptyCategory: return "EmptyCategory";
    case Violation::Kind::CoordinateOutOfRange: return "CoordinateOutOfRange";
    case Violation::Kind::CategorySetMismatch: return "CategorySetMismatch";
    case Violation::Kind::TransitionOrder: return "TransitionOrder";
    case Violation::Kind::SelfTransition: return "SelfTransition";
  }
  return "Unknown";
}

std::vector<Violation> validate_dataset(const Dataset& d) {
  std::vector<Violation> out;
  auto add = [&out](Violation::Kind kind, std::string subject, std::string detail) {
    out.push_back({kind, std::move(subject), std::move(detail)});
  };

  std::set<std::string> seen_ids;
  std::set<std::string> observed_categories;
  for (const auto& v : d.venues()) {
    if (!seen_ids.insert(v.id).second)
      add(Violation::Kind::DuplicateVenueId, v.id, "venue id appears more than once");
    if (v.category.empty())
      add(Violation::Kind::EmptyCategory, v.id, "venue has no category");
    else
      observed_categories.insert(v.category);
    if (v.lat < -90.0 || v.lat > 90.0 || v.lon < -180.0 || v.lon > 180.0)
      add(Violation::Kind::CoordinateOutOfRange, v.id, "lat/lon outside valid range");
  }

  if (observed_categories != d.categories())
    add(Violation::Kind::CategorySetMismatch, "",
        "category set differs from categories appearing in venues");

  // Recompute C_p from C and compare with the stored map.
  std::map<std::string, std::int64_t> recount;
  for (const auto& [id, n] : d.checkin_counts()) recount[id] = 0;
  for (const auto& c : d.checkins()) {
    if (!d.venue_index(c.venue)) {
      add(Violation::Kind::UnresolvedVenue, c.venue,
          "check-in references a venue not in the dataset");
      continue;
    }
    ++recount[c.venue];
  }
  for (const auto& [id, claimed] : d.checkin_counts()) {
    if (recount[id] != claimed)
      add(Violation::Kind::CountMismatch, id,
          "stored count " + std::to_string(claimed) + " but " +
              std::to_string(recount[id]) + " check-ins exist");
  }

  for (const auto& t : d.transitions()) {
    if (!d.venue_index(t.from))
      add(Violation::Kind::UnresolvedVenue, t.from,
          "transition origin not in the dataset");
    if (!d.venue_index(t.to))
      add(Violation::Kind::UnresolvedVenue, t.to,
          "transition destination not in the dataset");
    if (t.from == t.to)
      add(Violation::Kind::SelfTransition, t.from,
          "transition begins and ends at the same venue");
    if (t.t_to < t.t_from)
      add(Violation::Kind::TransitionOrder, t.from,
          "transition arrives before it departs");
  }

  return out;
}

}  // namespace placerank
