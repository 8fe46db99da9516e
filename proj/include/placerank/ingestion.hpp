#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "placerank/core.hpp"

namespace placerank {

struct ParseIssue {
  std::size_t line = 0;  // 1-based, 0 when not line-specific
  std::string message;
};

/// Raised when an input file cannot be parsed. Carries every issue found,
/// not just the first, so a bad file is reported in one pass.
class ParseError : public Error {
 public:
  ParseError(const std::filesystem::path& path, std::vector<ParseIssue> issues);
  const std::vector<ParseIssue>& issues() const { return issues_; }

 private:
  std::vector<ParseIssue> issues_;
};

// File formats (UTF-8 CSV, header required unless the file is empty):
//   venues:      id,lat,lon,category,chain        (chain may be empty)
//   checkins:    user,venue,timestamp             (integer epoch seconds)
//   transitions: from,to,user,t_from,t_to
std::vector<Venue> parse_venues(const std::filesystem::path& path);
std::vector<CheckIn> parse_checkins(const std::filesystem::path& path);
std::vector<Transition> parse_transitions(const std::filesystem::path& path);

void write_venues(const std::filesystem::path& path, std::span<const Venue> venues);
void write_checkins(const std::filesystem::path& path, std::span<const CheckIn> checkins);
void write_transitions(const std::filesystem::path& path,
                       std::span<const Transition> transitions);

/// Infers transitions from consecutive check-ins. Per user, check-ins are
/// ordered by (timestamp, venue id); every adjacent pair at distinct venues
/// whose gap is within max_gap_s (when set) yields one transition. Same-venue
/// pairs are skipped without breaking the chain, so A,A,B still yields A->B
/// departing from the second A.
std::vector<Transition> derive_transitions(
    std::span<const CheckIn> checkins,
    std::optional<std::int64_t> max_gap_s = std::nullopt);

struct ChainStats {
  std::size_t places = 0;
  std::int64_t checkins = 0;
  double mean_checkins_per_place = 0.0;  // <c_p>
};

struct StatsReport {
  /// Survival function of check-ins per venue over all venues:
  /// value -> fraction of venues with at least that many check-ins.
  std::vector<std::pair<std::int64_t, double>> checkin_ccdf;
  std::map<std::string, ChainStats> chains;
  /// Distances of transitions arriving at each chain's venues:
  /// meters -> cumulative fraction.
  std::map<std::string, std::vector<std::pair<double, double>>> transition_distance_cdf;
};

StatsReport dataset_stats(const Dataset& d, std::span<const std::string> chains);

nlohmann::json stats_to_json(const StatsReport& report);

}  // namespace placerank
