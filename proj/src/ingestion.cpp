#include "placerank/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "placerank/csv.hpp"

namespace placerank {

namespace {

std::string format_issues(const std::filesystem::path& path,
                          const std::vector<ParseIssue>& issues) {
  std::string msg = "failed to parse " + path.string() + ":";
  for (const auto& issue : issues) {
    msg += "\n  ";
    if (issue.line) msg += "line " + std::to_string(issue.line) + ": ";
    msg += issue.message;
  }
  return msg;
}

std::optional<double> to_double(const std::string& s) {
  double value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

std::optional<std::int64_t> to_int64(const std::string& s) {
  std::int64_t value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Opens a CSV file and checks its header. A zero-length file is treated as
/// an empty record set.
struct CsvFile {
  std::ifstream stream;
  bool empty = false;

  CsvFile(const std::filesystem::path& path, std::span<const std::string> header,
          std::vector<ParseIssue>& issues) {
    stream.open(path);
    if (!stream) {
      issues.push_back({0, "cannot open file"});
      return;
    }
    if (stream.peek() == std::ifstream::traits_type::eof()) {
      empty = true;
      return;
    }
    csv::Reader reader(stream);
    auto first = reader.next();
    std::vector<std::string> expected(header.begin(), header.end());
    if (!first || *first != expected)
      issues.push_back({1, "expected header '" +
                               csv::join_record(expected) + "'"});
  }
};

}  // namespace

ParseError::ParseError(const std::filesystem::path& path,
                       std::vector<ParseIssue> issues)
    : Error(format_issues(path, issues)), issues_(std::move(issues)) {}

std::vector<Venue> parse_venues(const std::filesystem::path& path) {
  static const std::vector<std::string> kHeader = {"id", "lat", "lon",
                                                   "category", "chain"};
  std::vector<ParseIssue> issues;
  CsvFile file(path, kHeader, issues);
  std::vector<Venue> venues;
  std::unordered_map<std::string, std::size_t> first_line;
  if (issues.empty() && !file.empty) {
    csv::Reader reader(file.stream);
    reader.next();  // header, already checked
    while (auto record = reader.next()) {
      const std::size_t line = reader.line_number();
      if (record->size() == 1 && (*record)[0].empty()) continue;  // blank line
      if (record->size() != kHeader.size()) {
        issues.push_back({line, "expected 5 fields, got " +
                                    std::to_string(record->size())});
        continue;
      }
      Venue v;
      v.id = (*record)[0];
      v.category = (*record)[3];
      v.chain = (*record)[4];
      auto lat = to_double((*record)[1]);
      auto lon = to_double((*record)[2]);
      if (v.id.empty()) {
        issues.push_back({line, "empty venue id"});
        continue;
      }
      if (!lat || !lon) {
        issues.push_back({line, "malformed coordinate"});
        continue;
      }
      if (*lat < -90.0 || *lat > 90.0 || *lon < -180.0 || *lon > 180.0) {
        issues.push_back({line, "coordinate out of range"});
        continue;
      }
      if (v.category.empty()) {
        issues.push_back({line, "empty category"});
        continue;
      }
      auto [it, inserted] = first_line.emplace(v.id, line);
      if (!inserted) {
        issues.push_back({line, "duplicate id '" + v.id + "' (first at line " +
                                    std::to_string(it->second) + ")"});
        continue;
      }
      v.lat = *lat;
      v.lon = *lon;
      venues.push_back(std::move(v));
    }
  }
  if (!issues.empty()) throw ParseError(path, std::move(issues));
  return venues;
}

std::vector<CheckIn> parse_checkins(const std::filesystem::path& path) {
  static const std::vector<std::string> kHeader = {"user", "venue", "timestamp"};
  std::vector<ParseIssue> issues;
  CsvFile file(path, kHeader, issues);
  std::vector<CheckIn> checkins;
  if (issues.empty() && !file.empty) {
    csv::Reader reader(file.stream);
    reader.next();
    while (auto record = reader.next()) {
      const std::size_t line = reader.line_number();
      if (record->size() == 1 && (*record)[0].empty()) continue;
      if (record->size() != kHeader.size()) {
        issues.push_back({line, "expected 3 fields, got " +
                                    std::to_string(record->size())});
        continue;
      }
      auto ts = to_int64((*record)[2]);
      if (!ts) {
        issues.push_back({line, "malformed timestamp '" + (*record)[2] + "'"});
        continue;
      }
      checkins.push_back({(*record)[0], (*record)[1], *ts});
    }
  }
  if (!issues.empty()) throw ParseError(path, std::move(issues));
  return checkins;
}

std::vector<Transition> parse_transitions(const std::filesystem::path& path) {
  static const std::vector<std::string> kHeader = {"from", "to", "user",
                                                   "t_from", "t_to"};
  std::vector<ParseIssue> issues;
  CsvFile file(path, kHeader, issues);
  std::vector<Transition> transitions;
  if (issues.empty() && !file.empty) {
    csv::Reader reader(file.stream);
    reader.next();
    while (auto record = reader.next()) {
      const std::size_t line = reader.line_number();
      if (record->size() == 1 && (*record)[0].empty()) continue;
      if (record->size() != kHeader.size()) {
        issues.push_back({line, "expected 5 fields, got " +
                                    std::to_string(record->size())});
        continue;
      }
      auto t_from = to_int64((*record)[3]);
      auto t_to = to_int64((*record)[4]);
      if (!t_from || !t_to) {
        issues.push_back({line, "malformed timestamp"});
        continue;
      }
      if (*t_to < *t_from) {
        issues.push_back({line, "transition arrives before it departs"});
        continue;
      }
      if ((*record)[0] == (*record)[1]) {
        issues.push_back({line, "transition from a venue to itself"});
        continue;
      }
      transitions.push_back({(*record)[0], (*record)[1], (*record)[2], *t_from, *t_to});
    }
  }
  if (!issues.empty()) throw ParseError(path, std::move(issues));
  return transitions;
}

void write_venues(const std::filesystem::path& path, std::span<const Venue> venues) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "id,lat,lon,category,chain\n";
  for (const auto& v : venues) {
    std::vector<std::string> fields = {v.id, format_double(v.lat),
                                       format_double(v.lon), v.category, v.chain};
    csv::write_record(out, fields);
  }
}

void write_checkins(const std::filesystem::path& path,
                    std::span<const CheckIn> checkins) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "user,venue,timestamp\n";
  for (const auto& c : checkins) {
    std::vector<std::string> fields = {c.user, c.venue, std::to_string(c.timestamp)};
    csv::write_record(out, fields);
  }
}

void write_transitions(const std::filesystem::path& path,
                       std::span<const Transition> transitions) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "from,to,user,t_from,t_to\n";
  for (const auto& t : transitions) {
    std::vector<std::string> fields = {t.from, t.to, t.user,
                                       std::to_string(t.t_from),
                                       std::to_string(t.t_to)};
    csv::write_record(out, fields);
  }
}

std::vector<Transition> derive_transitions(std::span<const CheckIn> checkins,
                                           std::optional<std::int64_t> max_gap_s) {
  // Group per user; std::map keeps user iteration order deterministic.
  std::map<std::string, std::vector<const CheckIn*>> by_user;
  for (const auto& c : checkins) by_user[c.user].push_back(&c);

  std::vector<Transition> out;
  for (auto& [user, events] : by_user) {
    std::sort(events.begin(), events.end(),
              [](const CheckIn* a, const CheckIn* b) {
                if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
                return a->venue < b->venue;
              });
    for (std::size_t i = 1; i < events.size(); ++i) {
      const CheckIn* prev = events[i - 1];
      const CheckIn* cur = events[i];
      if (prev->venue == cur->venue) continue;
      if (max_gap_s && cur->timestamp - prev->timestamp > *max_gap_s) continue;
      out.push_back({prev->venue, cur->venue, user, prev->timestamp, cur->timestamp});
    }
  }
  return out;
}

StatsReport dataset_stats(const Dataset& d, std::span<const std::string> chains) {
  StatsReport report;

  // CCDF over all venues: survival fraction at each distinct count.
  std::vector<std::int64_t> counts;
  counts.reserve(d.venues().size());
  for (std::size_t i = 0; i < d.venues().size(); ++i)
    counts.push_back(d.checkins_at(i));
  std::sort(counts.begin(), counts.end());
  const double n = static_cast<double>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0 && counts[i] == counts[i - 1]) continue;
    // counts is sorted, so everything from i on is >= counts[i].
    report.checkin_ccdf.emplace_back(counts[i],
                                     static_cast<double>(counts.size() - i) / n);
  }

  for (const auto& chain : chains) {
    auto members = d.chain_venues(chain);
    if (members.empty()) throw UnknownChainError(chain);

    ChainStats stats;
    stats.places = members.size();
    for (auto idx : members) stats.checkins += d.checkins_at(idx);
    stats.mean_checkins_per_place =
        static_cast<double>(stats.checkins) / static_cast<double>(stats.places);
    report.chains[chain] = stats;

    std::set<std::string> member_ids;
    for (auto idx : members) member_ids.insert(d.venues()[idx].id);

    std::vector<double> distances;
    for (const auto& t : d.transitions()) {
      if (!member_ids.contains(t.to)) continue;
      const Venue* from = d.find_venue(t.from);
      const Venue* to = d.find_venue(t.to);
      if (!from || !to) continue;
      distances.push_back(haversine_distance(from->coord(), to->coord()));
    }
    std::sort(distances.begin(), distances.end());
    std::vector<std::pair<double, double>> cdf;
    const double m = static_cast<double>(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
      if (i + 1 < distances.size() && distances[i + 1] == distances[i]) continue;
      cdf.emplace_back(distances[i], static_cast<double>(i + 1) / m);
    }
    report.transition_distance_cdf[chain] = std::move(cdf);
  }

  return report;
}

nlohmann::json stats_to_json(const StatsReport& report) {
  nlohmann::json j;
  j["version"] = 1;
  auto& ccdf = j["ccdf"] = nlohmann::json::array();
  for (const auto& [value, frac] : report.checkin_ccdf)
    ccdf.push_back({value, frac});
  auto& chains = j["chains"] = nlohmann::json::object();
  for (const auto& [label, stats] : report.chains) {
    chains[label] = {{"places", stats.places},
                     {"checkins", stats.checkins},
                     {"mean_checkins_per_place", stats.mean_checkins_per_place}};
  }
  auto& cdf = j["transition_cdf"] = nlohmann::json::object();
  for (const auto& [label, points] : report.transition_distance_cdf) {
    auto& arr = cdf[label] = nlohmann::json::array();
    for (const auto& [meters, frac] : points) arr.push_back({meters, frac});
  }
  return j;
}

}  // namespace placerank
