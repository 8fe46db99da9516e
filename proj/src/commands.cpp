#include "placerank/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "placerank/csv.hpp"
#include "placerank/geo_features.hpp"
#include "placerank/mobility_features.hpp"
#include "placerank/spatial.hpp"

namespace placerank {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot write " + out_path);
  out << content;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep))
    if (!part.empty()) parts.push_back(part);
  return parts;
}

RankerSpec ranker_from_config(const RunConfig& config) {
  RankerSpec spec = RankerSpec::parse(config.ranker);
  for (const auto& name : config.feature_subset) {
    const int slot = feature_slot(name);
    if (slot < 0) throw Error("unknown feature '" + name + "'");
    spec.feature_subset.push_back(slot);
  }
  spec.ridge_gamma = config.ridge_gamma;
  spec.ranknet.hidden_units = config.ranknet_hidden;
  spec.ranknet.learning_rate = config.ranknet_learning_rate;
  spec.ranknet.epochs = config.ranknet_epochs;
  return spec;
}

}  // namespace

Dataset load_dataset(const RunConfig& config) {
  auto venues = parse_venues(config.venues_path);
  auto checkins = parse_checkins(config.checkins_path);
  std::vector<Transition> transitions;
  if (!config.transitions_path.empty())
    transitions = parse_transitions(config.transitions_path);
  else
    transitions = derive_transitions(checkins, config.max_gap_s);
  return Dataset::build(std::move(venues), std::move(checkins), std::move(transitions));
}

CityConfig city_config_from(const RunConfig& config) {
  CityConfig city;
  city.venue_count = config.gen_venues;
  city.box_km_x = config.gen_box_km;
  city.box_km_y = config.gen_box_km;
  city.seed = config.seed;
  city.user_count = config.gen_users;

  for (const auto& entry : split(config.gen_categories, ',')) {
    const auto colon = entry.rfind(':');
    if (colon == std::string::npos)
      city.categories.push_back({entry, 1.0});
    else
      city.categories.push_back({entry.substr(0, colon), std::stod(entry.substr(colon + 1))});
  }

  city.chain.label = config.gen_chain_label;
  city.chain.category = config.gen_chain_category;
  city.chain.store_count = config.gen_stores;

  city.popularity.exponent = config.gen_exponent;
  city.popularity.feature_radius_m = config.radius_m;
  city.popularity.planted_base = config.gen_planted_base;
  city.popularity.planted_spread = config.gen_planted_spread;
  city.popularity.planted_noise_sd = config.gen_planted_noise;
  for (const auto& term : split(config.gen_planted, ',')) {
    const auto eq = term.find('=');
    if (eq == std::string::npos)
      city.popularity.planted.push_back({term, 1.0});
    else
      city.popularity.planted.push_back(
          {term.substr(0, eq), std::stod(term.substr(eq + 1))});
  }

  city.transitions.count = config.gen_transitions;
  city.transitions.decay_scale_m = config.gen_decay_m;
  city.transitions.derive_from_checkins = config.gen_derive_transitions;
  for (const auto& entry : split(config.gen_affinity, ';')) {
    const auto arrow = entry.find('>');
    const auto colon = entry.rfind(':');
    if (arrow == std::string::npos || colon == std::string::npos || colon < arrow)
      throw Error("bad affinity entry '" + entry + "' (want from>to:mult)");
    city.transitions.affinity[{entry.substr(0, arrow),
                               entry.substr(arrow + 1, colon - arrow - 1)}] =
        std::stod(entry.substr(colon + 1));
  }

  for (const auto& entry : split(config.gen_colocation, ';')) {
    const auto at = entry.find('@');
    if (at == std::string::npos)
      throw Error("bad colocation entry '" + entry + "' (want attracted@anchor:fraction:radius)");
    const auto rest = entry.substr(at + 1);
    const auto parts = split(rest, ':');
    if (parts.size() != 3)
      throw Error("bad colocation entry '" + entry + "' (want attracted@anchor:fraction:radius)");
    city.colocation.push_back({entry.substr(0, at), parts[0], std::stod(parts[1]),
                               std::stod(parts[2])});
  }

  return city;
}

StatsReport cmd_stats(const RunConfig& config) {
  const Dataset d = load_dataset(config);
  StatsReport report = dataset_stats(d, config.chains);
  write_text(config.out_path, stats_to_json(report).dump(2) + "\n");
  return report;
}

void cmd_coefficients(const RunConfig& config) {
  const Dataset d = load_dataset(config);
  SpatialIndex index(d.venues(), config.radius_m);
  const JensenCoefficients coeffs = jensen_coefficients(d, index, config.radius_m);

  std::vector<std::pair<CategoryPair, double>> rows(coeffs.kappa.begin(),
                                                    coeffs.kappa.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::ostringstream out;
  out << "from_category,to_category,kappa,baseline_mean\n";
  for (const auto& [pair, kappa] : rows) {
    const double baseline = coeffs.baseline_mean.at(pair);
    std::vector<std::string> fields = {pair.first, pair.second,
                                       format_double(kappa), format_double(baseline)};
    out << csv::join_record(fields) << '\n';
  }
  write_text(config.out_path, out.str());
}

void cmd_transition_ratios(const RunConfig& config) {
  const Dataset d = load_dataset(config);
  const TransitionTables tables = transition_tables(d);

  std::vector<std::pair<CategoryPair, double>> rows(tables.rho.begin(),
                                                    tables.rho.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::ostringstream out;
  out << "from_category,to_category,rho\n";
  for (const auto& [pair, rho] : rows) {
    std::vector<std::string> fields = {pair.first, pair.second, format_double(rho)};
    out << csv::join_record(fields) << '\n';
  }
  write_text(config.out_path, out.str());
}

void cmd_features(const RunConfig& config) {
  const Dataset d = load_dataset(config);
  auto members = d.chain_venues(config.chain);
  if (members.empty()) throw UnknownChainError(config.chain);

  SpatialIndex index(d.venues(), config.radius_m);
  const JensenCoefficients coeffs = jensen_coefficients(d, index, config.radius_m);
  const TransitionTables tables = transition_tables(d);

  std::ostringstream out;
  out << "area_id,lat,lon,category";
  for (const auto& name : kFeatureNames) out << ',' << name;
  out << ",y\n";
  for (auto idx : members) {
    const Venue& store = d.venues()[idx];
    CandidateArea area{store.coord(), config.radius_m, store.id, store.category};
    const FeatureVector fv = feature_vector(area, d, index, coeffs, tables);
    std::vector<std::string> fields = {store.id, format_double(store.lat),
                                       format_double(store.lon), store.category};
    for (double x : fv.x) fields.push_back(format_double(x));
    fields.push_back(std::to_string(fv.y.value_or(0)));
    out << csv::join_record(fields) << '\n';
  }
  write_text(config.out_path, out.str());
}

EvalReport cmd_evaluate(const RunConfig& config) {
  const Dataset d = load_dataset(config);
  const RankerSpec spec = ranker_from_config(config);

  CrossValConfig cv;
  cv.radius_m = config.radius_m;
  cv.k_list = config.k_list;
  cv.x_list = config.x_list;
  cv.n_experiments = config.n_experiments;
  cv.seed = config.seed;
  cv.jobs = config.jobs;
  cv.baseline_trials = config.baseline_trials;

  const EvalReport report = cross_validate(d, config.chain, spec, cv);
  write_text(config.out_path, report_to_json(report).dump(2) + "\n");
  return report;
}

void cmd_generate(const RunConfig& config) {
  const CityConfig city = city_config_from(config);
  const Dataset d = generate_city(city);

  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  write_venues(dir / "venues.csv", d.venues());
  write_checkins(dir / "checkins.csv", d.checkins());
  write_transitions(dir / "transitions.csv", d.transitions());
}

}  // namespace placerank
