#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "placerank/core.hpp"
#include "placerank/models.hpp"

namespace placerank {

/// Linear relevance of an area id derived from the ground-truth ranking:
/// (|L| - rank + 1) / |L|, so the top item scores 1 and the last 1/|L|.
/// Throws for ids absent from the list.
double relevance(const std::string& id, const RankedList& ground_truth);

/// Normalized discounted cumulative gain over the top k of the predicted
/// list, with gains 2^rel - 1 discounted by log2(position + 1). k must lie
/// in [1, |L|].
double ndcg_at_k(const RankedList& predicted, const RankedList& actual,
                 std::size_t k);

struct Experiment {
  std::uint64_t seed = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  RankedList predicted;
  RankedList actual;
  std::map<int, double> ndcg;       // k -> score
  std::size_t top1_actual_rank = 0; // ground-truth rank of the top prediction
};

/// Fraction of experiments whose top predicted area truly ranks within the
/// top x percent (threshold ceil(x/100 * |L|), never empty). x in (0, 100].
double accuracy_at_x(std::span<const Experiment> experiments, double x_percent);

/// Monte Carlo mean NDCG@k of uniformly random rankings of l_size items.
double random_baseline(std::size_t l_size, std::size_t k, std::size_t trials,
                       std::uint64_t seed);

struct RankNetConfig;  // from models.hpp

/// What produces the scores: a single feature slot, the true popularity
/// (oracle), or a trained model over a feature subset.
struct RankerSpec {
  enum class Kind { Feature, Oracle, Ridge, RankNet };
  Kind kind = Kind::Feature;
  int feature_slot = 0;                // Kind::Feature
  std::vector<int> feature_subset;     // models; empty = all eight
  double ridge_gamma = 1e-8;
  RankNetConfig ranknet;

  /// Accepts a feature name, "oracle", "ridge" or "ranknet".
  static RankerSpec parse(const std::string& name);
  std::string name() const;
};

struct CrossValConfig {
  double radius_m = 200.0;
  std::vector<int> k_list = {10};
  std::vector<int> x_list = {5, 10, 15, 20, 30};
  std::size_t n_experiments = 1000;
  std::uint64_t seed = 42;
  int jobs = 0;                        // 0 = hardware concurrency
  std::size_t baseline_trials = 10000;
  double test_fraction = 0.33;
};

struct EvalReport {
  std::string ranker;
  std::string chain;
  double radius_m = 0.0;
  std::size_t n_experiments = 0;
  std::uint64_t seed = 0;
  std::map<int, double> ndcg_mean;   // k -> mean over experiments
  std::map<int, double> accuracy;    // X -> fraction
  std::map<int, double> baseline;    // k -> random-ranker mean
};

class TooFewStoresError : public Error {
 public:
  using Error::Error;
};

/// Repeated random holdout over a chain's store areas: per experiment,
/// sample ceil(test_fraction * n) areas as the test set, train on the rest
/// (models only), rank the test areas and score against the ground-truth
/// popularity ranking. Deterministic given the seed; experiments may run
/// concurrently without changing the result.
EvalReport cross_validate(const Dataset& d, const std::string& chain,
                          const RankerSpec& ranker, const CrossValConfig& config);

/// Same run, returning the per-experiment records (used by tests and by
/// cross_validate itself).
std::vector<Experiment> cross_validate_experiments(const Dataset& d,
                                                   const std::string& chain,
                                                   const RankerSpec& ranker,
                                                   const CrossValConfig& config);

nlohmann::json report_to_json(const EvalReport& report);

}  // namespace placerank
