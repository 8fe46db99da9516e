#include "placerank/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "placerank/geo_features.hpp"
#include "placerank/mobility_features.hpp"
#include "placerank/parallel.hpp"
#include "placerank/rng.hpp"
#include "placerank/spatial.hpp"

namespace placerank {

double relevance(const std::string& id, const RankedList& ground_truth) {
  const std::size_t rank = ground_truth.rank_of(id);
  if (rank == 0) throw std::invalid_argument("relevance: unknown area '" + id + "'");
  const double n = static_cast<double>(ground_truth.size());
  return (n - static_cast<double>(rank) + 1.0) / n;
}

namespace {

double dcg(std::span<const double> relevances, std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    sum += (std::exp2(relevances[i]) - 1.0) /
           std::log2(static_cast<double>(i) + 2.0);
  return sum;
}

/// iDCG@k for a list of l items with the linear relevance scheme; the ideal
/// ordering is relevance descending: (l - i) / l at position i.
double ideal_dcg(std::size_t l, std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double rel =
        (static_cast<double>(l) - static_cast<double>(i)) / static_cast<double>(l);
    sum += (std::exp2(rel) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return sum;
}

}  // namespace

double ndcg_at_k(const RankedList& predicted, const RankedList& actual,
                 std::size_t k) {
  const std::size_t l = actual.size();
  if (k < 1 || k > l)
    throw std::invalid_argument("ndcg_at_k: k must lie in [1, |L|]");
  if (predicted.size() != l)
    throw std::invalid_argument("ndcg_at_k: lists rank different candidate sets");

  std::vector<double> rels;
  rels.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    rels.push_back(relevance(predicted.ids[i], actual));
  return dcg(rels, k) / ideal_dcg(l, k);
}

double accuracy_at_x(std::span<const Experiment> experiments, double x_percent) {
  if (x_percent <= 0.0 || x_percent > 100.0)
    throw std::invalid_argument("accuracy_at_x: X must lie in (0, 100]");
  if (experiments.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& e : experiments) {
    const double n = static_cast<double>(e.test_ids.size());
    // Multiply before dividing: X * n is exact for integer-valued inputs,
    // so thresholds like ceil(10% of 60) = 6 never round up to 7.
    const auto threshold =
        static_cast<std::size_t>(std::ceil(x_percent * n / 100.0));
    if (e.top1_actual_rank >= 1 && e.top1_actual_rank <= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(experiments.size());
}

double random_baseline(std::size_t l_size, std::size_t k, std::size_t trials,
                       std::uint64_t seed) {
  if (l_size == 0 || k < 1 || k > l_size)
    throw std::invalid_argument("random_baseline: need 1 <= k <= l_size");
  if (trials < 1) throw std::invalid_argument("random_baseline: trials >= 1");

  const double idcg = ideal_dcg(l_size, k);
  Rng rng(seed);
  // Item at ground-truth rank j (0-based) has relevance (l - j) / l; a random
  // ranking puts a distinct random rank at each of the top-k positions.
  double total = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto sample = rng.sample_without_replacement(l_size, k);
    double dcg_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double rel = (static_cast<double>(l_size) - static_cast<double>(sample[i])) /
                         static_cast<double>(l_size);
      dcg_sum += (std::exp2(rel) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
    }
    total += dcg_sum / idcg;
  }
  return total / static_cast<double>(trials);
}

RankerSpec RankerSpec::parse(const std::string& name) {
  RankerSpec spec;
  if (name == "oracle") {
    spec.kind = Kind::Oracle;
    return spec;
  }
  if (name == "ridge") {
    spec.kind = Kind::Ridge;
    return spec;
  }
  if (name == "ranknet") {
    spec.kind = Kind::RankNet;
    return spec;
  }
  const int slot = placerank::feature_slot(name);
  if (slot < 0)
    throw std::invalid_argument(
        "unknown ranker '" + name +
        "' (expected a feature name, 'oracle', 'ridge' or 'ranknet')");
  spec.kind = Kind::Feature;
  spec.feature_slot = slot;
  return spec;
}

std::string RankerSpec::name() const {
  switch (kind) {
    case Kind::Oracle: return "oracle";
    case Kind::Ridge: return "ridge";
    case Kind::RankNet: return "ranknet";
    case Kind::Feature: return std::string(kFeatureNames[static_cast<std::size_t>(feature_slot)]);
  }
  return "?";
}

namespace {

struct AreaRecord {
  std::string id;
  FeatureVector features;
  std::int64_t y = 0;
};

RankedList ground_truth_ranking(std::span<const AreaRecord* const> areas) {
  std::vector<const AreaRecord*> sorted(areas.begin(), areas.end());
  std::sort(sorted.begin(), sorted.end(), [](const AreaRecord* a, const AreaRecord* b) {
    if (a->y != b->y) return a->y > b->y;
    return a->id < b->id;  // deterministic tie-break
  });
  RankedList list;
  list.ids.reserve(sorted.size());
  for (const auto* a : sorted) list.ids.push_back(a->id);
  return list;
}

}  // namespace

std::vector<Experiment> cross_validate_experiments(const Dataset& d,
                                                   const std::string& chain,
                                                   const RankerSpec& ranker,
                                                   const CrossValConfig& config) {
  auto member_indices = d.chain_venues(chain);
  if (member_indices.empty()) throw UnknownChainError(chain);
  if (member_indices.size() < 4)
    throw TooFewStoresError("chain '" + chain + "' has only " +
                            std::to_string(member_indices.size()) +
                            " stores; need at least 4");

  const std::size_t n_areas = member_indices.size();
  const auto test_size = static_cast<std::size_t>(
      std::ceil(config.test_fraction * static_cast<double>(n_areas)));
  for (int k : config.k_list) {
    if (k < 1 || static_cast<std::size_t>(k) > test_size)
      throw std::invalid_argument(
          "k = " + std::to_string(k) + " exceeds the test-set size " +
          std::to_string(test_size) + "; choose k <= ceil(" +
          std::to_string(config.test_fraction) + " * " + std::to_string(n_areas) + ")");
  }
  for (int x : config.x_list)
    if (x <= 0 || x > 100)
      throw std::invalid_argument("X values must lie in (0, 100]");

  // Features depend only on the area and its focal exclusion, never on the
  // train/test split, so they are computed once and shared by experiments.
  SpatialIndex index(d.venues(), config.radius_m);
  const JensenCoefficients coeffs = jensen_coefficients(d, index, config.radius_m);
  const TransitionTables tables = transition_tables(d);

  std::vector<AreaRecord> areas;
  areas.reserve(n_areas);
  for (auto idx : member_indices) {
    const Venue& store = d.venues()[idx];
    CandidateArea area;
    area.center = store.coord();
    area.radius_m = config.radius_m;
    area.focal_venue = store.id;
    area.target_category = store.category;
    AreaRecord record;
    record.id = store.id;
    record.features = feature_vector(area, d, index, coeffs, tables);
    record.y = d.checkins_at(idx);
    areas.push_back(std::move(record));
  }

  std::vector<Experiment> experiments(config.n_experiments);
  parallel_for(config.n_experiments, config.jobs, [&](std::size_t e) {
    Experiment& exp = experiments[e];
    exp.seed = derive_seed(config.seed, e);
    Rng rng(exp.seed);

    auto test_pick = rng.sample_without_replacement(n_areas, test_size);
    std::vector<bool> in_test(n_areas, false);
    for (auto i : test_pick) in_test[i] = true;

    std::vector<const AreaRecord*> train_areas, test_areas;
    for (std::size_t i = 0; i < n_areas; ++i)
      (in_test[i] ? test_areas : train_areas).push_back(&areas[i]);

    for (const auto* a : train_areas) exp.train_ids.push_back(a->id);
    for (const auto* a : test_areas) exp.test_ids.push_back(a->id);

    std::map<std::string, double> scores;
    switch (ranker.kind) {
      case RankerSpec::Kind::Oracle:
        for (const auto* a : test_areas)
          scores[a->id] = static_cast<double>(a->y);
        break;
      case RankerSpec::Kind::Feature:
        for (const auto* a : test_areas)
          scores[a->id] = a->features.x[static_cast<std::size_t>(ranker.feature_slot)];
        break;
      case RankerSpec::Kind::Ridge:
      case RankerSpec::Kind::RankNet: {
        std::vector<FeatureVector> train_vecs;
        Eigen::VectorXd y_train(static_cast<Eigen::Index>(train_areas.size()));
        for (std::size_t i = 0; i < train_areas.size(); ++i) {
          train_vecs.push_back(train_areas[i]->features);
          y_train(static_cast<Eigen::Index>(i)) =
              static_cast<double>(train_areas[i]->y);
        }
        Eigen::MatrixXd x_train = feature_matrix(train_vecs, ranker.feature_subset);
        const Normalizer norm = Normalizer::fit(x_train);
        x_train = norm.apply(x_train);

        std::vector<FeatureVector> test_vecs;
        for (const auto* a : test_areas) test_vecs.push_back(a->features);
        const Eigen::MatrixXd x_test =
            norm.apply(feature_matrix(test_vecs, ranker.feature_subset));

        if (ranker.kind == RankerSpec::Kind::Ridge) {
          const RidgeModel model = ridge_fit(x_train, y_train, ranker.ridge_gamma);
          for (std::size_t i = 0; i < test_areas.size(); ++i)
            scores[test_areas[i]->id] =
                ridge_predict(model, x_test.row(static_cast<Eigen::Index>(i)).transpose());
        } else {
          RankNetConfig net_config = ranker.ranknet;
          net_config.seed = derive_seed(exp.seed, 1);
          const RankNetModel model = ranknet_train(x_train, y_train, net_config);
          for (std::size_t i = 0; i < test_areas.size(); ++i)
            scores[test_areas[i]->id] =
                model.score(x_test.row(static_cast<Eigen::Index>(i)).transpose());
        }
        break;
      }
    }

    exp.predicted = rank_by_score(scores);
    exp.actual = ground_truth_ranking(test_areas);
    for (int k : config.k_list)
      exp.ndcg[k] = ndcg_at_k(exp.predicted, exp.actual, static_cast<std::size_t>(k));
    exp.top1_actual_rank = exp.actual.rank_of(exp.predicted.ids.front());
  });

  return experiments;
}

EvalReport cross_validate(const Dataset& d, const std::string& chain,
                          const RankerSpec& ranker, const CrossValConfig& config) {
  auto experiments = cross_validate_experiments(d, chain, ranker, config);

  EvalReport report;
  report.ranker = ranker.name();
  report.chain = chain;
  report.radius_m = config.radius_m;
  report.n_experiments = config.n_experiments;
  report.seed = config.seed;

  for (int k : config.k_list) {
    double sum = 0.0;
    for (const auto& e : experiments) sum += e.ndcg.at(k);
    report.ndcg_mean[k] = sum / static_cast<double>(experiments.size());
  }
  for (int x : config.x_list)
    report.accuracy[x] = accuracy_at_x(experiments, static_cast<double>(x));

  const std::size_t test_size = experiments.front().test_ids.size();
  for (int k : config.k_list)
    report.baseline[k] =
        random_baseline(test_size, static_cast<std::size_t>(k),
                        config.baseline_trials, derive_seed(config.seed, 1ull << 32));
  return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["version"] = 1;
  j["ranker"] = report.ranker;
  j["chain"] = report.chain;
  j["r"] = report.radius_m;
  j["n_experiments"] = report.n_experiments;
  j["seed"] = report.seed;
  auto fill = [](const std::map<int, double>& m) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [key, value] : m) obj[std::to_string(key)] = value;
    return obj;
  };
  j["ndcg"] = fill(report.ndcg_mean);
  j["accuracy"] = fill(report.accuracy);
  j["baseline"] = fill(report.baseline);
  return j;
}

}  // namespace placerank
