#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "placerank/core.hpp"
#include "placerank/evaluation.hpp"
#include "placerank/ingestion.hpp"
#include "placerank/synthgen.hpp"

namespace placerank {

/// Everything a run needs, assembled from defaults, an optional config file
/// and command-line flags (flags win). All randomness flows from seed.
struct RunConfig {
  // inputs
  std::string venues_path;
  std::string checkins_path;
  std::string transitions_path;  // optional; empty = derive from check-ins
  std::optional<std::int64_t> max_gap_s;

  // shared
  double radius_m = 200.0;
  std::uint64_t seed = 42;
  int jobs = 0;  // 0 = all cores
  std::string out_path;  // empty = stdout

  // stats
  std::vector<std::string> chains;

  // evaluate / features
  std::string chain;
  std::string ranker = "ridge";
  std::vector<std::string> feature_subset;
  std::vector<int> k_list = {10};
  std::vector<int> x_list = {5, 10, 15, 20, 30};
  std::size_t n_experiments = 1000;
  double ridge_gamma = 1e-8;
  int ranknet_hidden = 10;
  double ranknet_learning_rate = 0.01;
  int ranknet_epochs = 100;
  std::size_t baseline_trials = 10000;

  // generate
  std::string out_dir = ".";
  std::size_t gen_venues = 1000;
  std::size_t gen_stores = 0;
  std::string gen_chain_label = "brand";
  std::string gen_chain_category = "coffee";
  std::string gen_categories = "generic:1";
  double gen_box_km = 10.0;
  double gen_exponent = 2.0;
  std::string gen_planted;  // "feature=weight,feature=weight"
  double gen_planted_base = 500.0;
  double gen_planted_spread = 150.0;
  double gen_planted_noise = 0.0;
  std::size_t gen_transitions = 0;
  double gen_decay_m = 300.0;
  std::string gen_affinity;    // "from>to:mult;..."
  std::string gen_colocation;  // "attracted@anchor:fraction:radius;..."
  std::size_t gen_users = 200;
  bool gen_derive_transitions = false;
};

/// Parses venue/check-in files and either parses or derives transitions.
Dataset load_dataset(const RunConfig& config);

/// Builds the generator configuration from the gen_* fields.
CityConfig city_config_from(const RunConfig& config);

StatsReport cmd_stats(const RunConfig& config);
void cmd_coefficients(const RunConfig& config);
void cmd_transition_ratios(const RunConfig& config);
void cmd_features(const RunConfig& config);
EvalReport cmd_evaluate(const RunConfig& config);
void cmd_generate(const RunConfig& config);

}  // namespace placerank
