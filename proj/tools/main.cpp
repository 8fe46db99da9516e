#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "placerank/commands.hpp"

namespace {

void add_input_options(CLI::App* cmd, placerank::RunConfig& config,
                       std::int64_t& max_gap) {
  cmd->add_option("--venues", config.venues_path, "Venues CSV (id,lat,lon,category,chain)")
      ->required();
  cmd->add_option("--checkins", config.checkins_path,
                  "Check-ins CSV (user,venue,timestamp)")
      ->required();
  cmd->add_option("--transitions", config.transitions_path,
                  "Transitions CSV (from,to,user,t_from,t_to); derived from "
                  "check-ins when omitted");
  cmd->add_option("--max-gap", max_gap,
                  "Maximum seconds between consecutive check-ins when deriving "
                  "transitions (-1 = unlimited)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  placerank::RunConfig config;
  std::int64_t max_gap = -1;

  CLI::App app{"Ranks candidate areas for new retail stores from venue and "
               "check-in data"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value config file; flags override it");
  app.add_option("--seed", config.seed, "Seed for all randomness")
      ->capture_default_str();
  app.add_option("--jobs", config.jobs, "Worker threads (0 = all cores)")
      ->capture_default_str();

  auto* generate = app.add_subcommand("generate", "Write a synthetic city as CSV files");
  generate->fallthrough();
  generate->add_option("--out-dir", config.out_dir, "Output directory")
      ->capture_default_str();
  generate->add_option("--venues", config.gen_venues, "Background venue count")
      ->capture_default_str();
  generate->add_option("--stores", config.gen_stores, "Chain store count")
      ->capture_default_str();
  generate->add_option("--chain-label", config.gen_chain_label, "Chain label")
      ->capture_default_str();
  generate->add_option("--chain-category", config.gen_chain_category,
                       "Category of the chain's stores")
      ->capture_default_str();
  generate->add_option("--categories", config.gen_categories,
                       "Background mix as name:weight,name:weight")
      ->capture_default_str();
  generate->add_option("--box-km", config.gen_box_km, "Square box side in km")
      ->capture_default_str();
  generate->add_option("--exponent", config.gen_exponent,
                       "Power-law exponent for check-in counts")
      ->capture_default_str();
  generate->add_option("--planted", config.gen_planted,
                       "Plant store popularity as feature=weight,feature=weight");
  generate->add_option("--planted-base", config.gen_planted_base,
                       "Mean planted store popularity")
      ->capture_default_str();
  generate->add_option("--planted-spread", config.gen_planted_spread,
                       "Scale of the planted signal")
      ->capture_default_str();
  generate->add_option("--planted-noise", config.gen_planted_noise,
                       "Gaussian noise added to planted popularity")
      ->capture_default_str();
  generate->add_option("--transitions", config.gen_transitions, "Transition count")
      ->capture_default_str();
  generate->add_option("--decay", config.gen_decay_m,
                       "Distance-decay scale for transitions, meters")
      ->capture_default_str();
  generate->add_option("--affinity", config.gen_affinity,
                       "Category affinity as from>to:mult;from>to:mult");
  generate->add_option("--colocate", config.gen_colocation,
                       "Co-location rules as attracted@anchor:fraction:radius_m;...");
  generate->add_option("--users", config.gen_users, "Synthetic user count")
      ->capture_default_str();
  generate->add_flag("--derive-transitions", config.gen_derive_transitions,
                     "Derive transitions from check-in sequences instead of "
                     "sampling them directly");
  generate->add_option("--r", config.radius_m,
                       "Radius used when planting feature-based popularity")
      ->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Dataset statistics as JSON");
  stats->fallthrough();
  add_input_options(stats, config, max_gap);
  stats->add_option("--chains", config.chains, "Chain labels to profile")
      ->delimiter(',');
  stats->add_option("--out", config.out_path, "Output path (default stdout)");

  auto* coefficients =
      app.add_subcommand("coefficients", "Inter-category attraction table as CSV");
  coefficients->fallthrough();
  add_input_options(coefficients, config, max_gap);
  coefficients->add_option("--r", config.radius_m, "Disk radius in meters")
      ->capture_default_str();
  coefficients->add_option("--out", config.out_path, "Output path (default stdout)");

  auto* ratios = app.add_subcommand("transition-ratios",
                                    "Category transition-ratio table as CSV");
  ratios->fallthrough();
  add_input_options(ratios, config, max_gap);
  ratios->add_option("--out", config.out_path, "Output path (default stdout)");

  auto* features =
      app.add_subcommand("features", "Per-area feature vectors for a chain as CSV");
  features->fallthrough();
  add_input_options(features, config, max_gap);
  features->add_option("--chain", config.chain, "Chain label")->required();
  features->add_option("--r", config.radius_m, "Disk radius in meters")
      ->capture_default_str();
  features->add_option("--out", config.out_path, "Output path (default stdout)");

  auto* evaluate = app.add_subcommand(
      "evaluate", "Cross-validated ranking evaluation for a chain");
  evaluate->fallthrough();
  add_input_options(evaluate, config, max_gap);
  evaluate->add_option("--chain", config.chain, "Chain label")->required();
  evaluate->add_option("--ranker", config.ranker,
                       "Feature name, 'oracle', 'ridge' or 'ranknet'")
      ->capture_default_str();
  evaluate->add_option("--features", config.feature_subset,
                       "Feature subset for model rankers (default: all eight)")
      ->delimiter(',');
  evaluate->add_option("--r", config.radius_m, "Disk radius in meters")
      ->capture_default_str();
  evaluate->add_option("--k", config.k_list, "NDCG cutoffs")->delimiter(',');
  evaluate->add_option("--x", config.x_list, "Accuracy percentages")->delimiter(',');
  evaluate->add_option("--experiments", config.n_experiments,
                       "Number of holdout experiments")
      ->capture_default_str();
  evaluate->add_option("--gamma", config.ridge_gamma, "Ridge regularization")
      ->capture_default_str();
  evaluate->add_option("--ranknet-hidden", config.ranknet_hidden,
                       "Hidden units in the pairwise ranker")
      ->capture_default_str();
  evaluate->add_option("--ranknet-lr", config.ranknet_learning_rate,
                       "Learning rate of the pairwise ranker")
      ->capture_default_str();
  evaluate->add_option("--ranknet-epochs", config.ranknet_epochs,
                       "Training epochs of the pairwise ranker")
      ->capture_default_str();
  evaluate->add_option("--baseline-trials", config.baseline_trials,
                       "Monte Carlo trials for the random baseline")
      ->capture_default_str();
  evaluate->add_option("--out", config.out_path, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (max_gap >= 0) config.max_gap_s = max_gap;

  try {
    if (generate->parsed()) {
      placerank::cmd_generate(config);
    } else if (stats->parsed()) {
      placerank::cmd_stats(config);
    } else if (coefficients->parsed()) {
      placerank::cmd_coefficients(config);
    } else if (ratios->parsed()) {
      placerank::cmd_transition_ratios(config);
    } else if (features->parsed()) {
      placerank::cmd_features(config);
    } else if (evaluate->parsed()) {
      placerank::cmd_evaluate(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
