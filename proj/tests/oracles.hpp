// Independent brute-force reference implementations used to check the
// library. Everything here evaluates the defining formulas directly over
// plain loops - no spatial index, no shared code with the checked paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "placerank/core.hpp"
#include "placerank/geo.hpp"

namespace oracle {

using placerank::CandidateArea;
using placerank::Dataset;
using placerank::RankedList;
using placerank::Venue;

inline std::vector<std::size_t> scan_radius(const std::vector<Venue>& venues,
                                            placerank::LatLon center, double r) {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < venues.size(); ++i)
    if (placerank::haversine_distance(venues[i].coord(), center) < r)
      hits.push_back(i);
  return hits;
}

inline std::vector<std::size_t> neighbors(const Dataset& d, const CandidateArea& a) {
  std::vector<std::size_t> hits;
  const auto& venues = d.venues();
  for (std::size_t i = 0; i < venues.size(); ++i) {
    if (a.focal_venue && venues[i].id == *a.focal_venue) continue;
    if (placerank::haversine_distance(venues[i].coord(), a.center) < a.radius_m)
      hits.push_back(i);
  }
  return hits;
}

inline double density(const Dataset& d, const CandidateArea& a) {
  return static_cast<double>(neighbors(d, a).size());
}

inline double entropy(const Dataset& d, const CandidateArea& a) {
  auto hits = neighbors(d, a);
  if (hits.empty()) return 0.0;
  std::map<std::string, double> counts;
  for (auto i : hits) counts[d.venues()[i].category] += 1.0;
  double h = 0.0;
  for (auto& [cat, n] : counts) {
    const double p = n / static_cast<double>(hits.size());
    h -= p * std::log2(p);
  }
  return h;
}

inline double competitiveness(const Dataset& d, const CandidateArea& a) {
  auto hits = neighbors(d, a);
  if (hits.empty()) return 0.0;
  double same = 0.0;
  for (auto i : hits)
    if (d.venues()[i].category == a.target_category) same += 1.0;
  return -same / static_cast<double>(hits.size());
}

inline double area_popularity(const Dataset& d, const CandidateArea& a) {
  double sum = 0.0;
  for (auto i : neighbors(d, a)) sum += static_cast<double>(d.checkins_at(i));
  return sum;
}

inline double transition_density(const Dataset& d, const CandidateArea& a) {
  double count = 0.0;
  for (const auto& t : d.transitions()) {
    if (a.focal_venue && (t.from == *a.focal_venue || t.to == *a.focal_venue))
      continue;
    const Venue* m = d.find_venue(t.from);
    const Venue* n = d.find_venue(t.to);
    if (!m || !n) continue;
    if (placerank::haversine_distance(m->coord(), a.center) < a.radius_m &&
        placerank::haversine_distance(n->coord(), a.center) < a.radius_m)
      count += 1.0;
  }
  return count;
}

inline double incoming_flow(const Dataset& d, const CandidateArea& a) {
  double count = 0.0;
  for (const auto& t : d.transitions()) {
    if (a.focal_venue && (t.from == *a.focal_venue || t.to == *a.focal_venue))
      continue;
    const Venue* m = d.find_venue(t.from);
    const Venue* n = d.find_venue(t.to);
    if (!m || !n) continue;
    if (placerank::haversine_distance(m->coord(), a.center) > a.radius_m &&
        placerank::haversine_distance(n->coord(), a.center) < a.radius_m)
      count += 1.0;
  }
  return count;
}

struct KappaTable {
  std::map<std::pair<std::string, std::string>, double> kappa;
  std::map<std::pair<std::string, std::string>, double> baseline;
};

/// Direct evaluation of the attraction coefficients: for every category pair
/// (a, b), kappa = (N - N_a) / (N_a N_b) * sum over venues p of category a of
/// N_b(p, r) / (N(p, r) - N_a(p, r)), skipping zero denominators. The venue
/// itself never counts as its own neighbor.
inline KappaTable kappa_table(const Dataset& d, double r) {
  KappaTable table;
  const auto& venues = d.venues();
  const double n = static_cast<double>(venues.size());

  std::map<std::string, double> cat_count;
  for (const auto& v : venues) cat_count[v.category] += 1.0;

  for (const auto& [cat_a, n_a] : cat_count) {
    for (const auto& [cat_b, n_b] : cat_count) {
      double ratio_sum = 0.0;
      double neighbor_sum = 0.0;
      for (std::size_t p = 0; p < venues.size(); ++p) {
        // neighbor counts around p, excluding p
        double total = 0.0, of_a = 0.0, of_b = 0.0;
        for (std::size_t q = 0; q < venues.size(); ++q) {
          if (q == p) continue;
          if (placerank::haversine_distance(venues[q].coord(), venues[p].coord()) >= r)
            continue;
          total += 1.0;
          if (venues[q].category == cat_a) of_a += 1.0;
          if (venues[q].category == cat_b) of_b += 1.0;
        }
        if (venues[p].category == cat_a && total - of_a > 0.0)
          ratio_sum += of_b / (total - of_a);
        if (venues[p].category == cat_b) neighbor_sum += of_a;
      }
      table.kappa[{cat_a, cat_b}] = (n - n_a) / (n_a * n_b) * ratio_sum;
      table.baseline[{cat_a, cat_b}] = neighbor_sum / n_b;
    }
  }
  return table;
}

inline double jensen_quality(const Dataset& d, const CandidateArea& a,
                             const KappaTable& table) {
  std::map<std::string, double> observed;
  for (auto i : neighbors(d, a)) observed[d.venues()[i].category] += 1.0;
  double sum = 0.0;
  for (const auto& [pair, kappa] : table.kappa) {
    if (pair.second != a.target_category || kappa <= 0.0) continue;
    const double obs = observed.count(pair.first) ? observed.at(pair.first) : 0.0;
    sum += std::log(kappa) * (obs - table.baseline.at(pair));
  }
  return sum;
}

struct SigmaTable {
  std::map<std::pair<std::string, std::string>, double> sigma;
  std::map<std::pair<std::string, std::string>, double> rho;
};

/// Per-venue enumeration of sigma: for each source venue with check-ins,
/// count its transitions per destination category, divide by its check-ins,
/// then average the fractions within the source category.
inline SigmaTable sigma_table(const Dataset& d) {
  SigmaTable table;
  std::map<std::string, double> cat_count;
  for (const auto& v : d.venues()) cat_count[v.category] += 1.0;
  const double n = static_cast<double>(d.venues().size());

  std::map<std::string, std::vector<const Venue*>> by_cat;
  for (const auto& v : d.venues()) by_cat[v.category].push_back(&v);

  for (const auto& [cat_a, members] : by_cat) {
    std::map<std::string, double> fraction_sum;
    double active = 0.0;
    for (const Venue* p : members) {
      const double c_p = static_cast<double>(d.checkins_at(p->id));
      if (c_p <= 0.0) continue;
      active += 1.0;
      std::map<std::string, double> outgoing;
      for (const auto& t : d.transitions()) {
        if (t.from != p->id) continue;
        const Venue* dest = d.find_venue(t.to);
        if (dest) outgoing[dest->category] += 1.0;
      }
      for (auto& [cat_b, count] : outgoing) fraction_sum[cat_b] += count / c_p;
    }
    if (active == 0.0) continue;
    for (auto& [cat_b, sum] : fraction_sum) {
      const double sigma = sum / active;
      table.sigma[{cat_a, cat_b}] = sigma;
      table.rho[{cat_a, cat_b}] =
          sigma * (n - cat_count.at(cat_a)) / (cat_count.at(cat_a) * cat_count.at(cat_b));
    }
  }
  return table;
}

inline double transition_quality(const Dataset& d, const CandidateArea& a,
                                 const SigmaTable& table) {
  double sum = 0.0;
  for (auto i : neighbors(d, a)) {
    const Venue& p = d.venues()[i];
    auto it = table.sigma.find({p.category, a.target_category});
    if (it == table.sigma.end()) continue;
    sum += it->second * static_cast<double>(d.checkins_at(i));
  }
  return sum;
}

/// Direct DCG/iDCG evaluation from the defining sums.
inline double ndcg(const RankedList& predicted, const RankedList& actual,
                   std::size_t k) {
  const double l = static_cast<double>(actual.size());
  auto rel = [&](const std::string& id) {
    return (l - static_cast<double>(actual.rank_of(id)) + 1.0) / l;
  };
  double dcg = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    dcg += (std::pow(2.0, rel(predicted.ids[i])) - 1.0) /
           (std::log(static_cast<double>(i + 2)) / std::log(2.0));
  double idcg = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    idcg += (std::pow(2.0, rel(actual.ids[i])) - 1.0) /
            (std::log(static_cast<double>(i + 2)) / std::log(2.0));
  return dcg / idcg;
}

}  // namespace oracle
