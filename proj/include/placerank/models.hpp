#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "placerank/core.hpp"

namespace placerank {

/// Z-score transform with population standard deviation (divide by n).
/// Zero-variance columns are mapped to constant 0.
class Normalizer {
 public:
  Normalizer() = default;

  /// Needs at least 2 rows.
  static Normalizer fit(const Eigen::MatrixXd& train);

  /// Restores a normalizer from stored parameters.
  static Normalizer from_params(Eigen::VectorXd mean, Eigen::VectorXd stddev);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& rows) const;
  Eigen::VectorXd apply_row(const Eigen::VectorXd& row) const;

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& stddev() const { return std_; }
  Eigen::Index dim() const { return mean_.size(); }

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd std_;  // 0 marks a zero-variance column
};

/// Convenience overload over feature vectors (all eight slots).
Normalizer fit_normalizer(std::span<const FeatureVector> train);

/// Rows of the design matrix from feature vectors, optionally restricted to
/// a subset of slots (empty subset = all eight, canonical order).
Eigen::MatrixXd feature_matrix(std::span<const FeatureVector> vectors,
                               std::span<const int> slots = {});

struct RidgeModel {
  Eigen::VectorXd weights;    // slope coefficients
  double intercept = 0.0;     // fitted but never penalized
  double gamma = 1e-8;
};

class SingularSystemError : public Error {
 public:
  SingularSystemError() : Error("normal equations are singular at gamma = 0") {}
};

/// Exact closed-form solution of min ||X w - y||^2 + gamma ||w||^2 with an
/// unpenalized intercept. X rows are expected to be normalized already.
/// Throws SingularSystemError when gamma == 0 and the system is singular.
RidgeModel ridge_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     double gamma = 1e-8);

double ridge_predict(const RidgeModel& model, const Eigen::VectorXd& x);

struct RankNetConfig {
  int hidden_units = 10;
  double learning_rate = 0.01;
  int epochs = 100;
  std::uint64_t seed = 1;
};

/// One-hidden-layer scoring network H(x) trained on pairwise preferences:
/// for venues A, B with y_A > y_B the loss for o = H(A) - H(B) is
/// -o + log(1 + e^o). Full-batch gradient descent, deterministic per seed.
class RankNetModel {
 public:
  RankNetModel() = default;

  double score(const Eigen::VectorXd& x) const;

  const RankNetConfig& config() const { return config_; }
  const std::vector<double>& loss_history() const { return loss_history_; }

  const Eigen::MatrixXd& hidden_weights() const { return w_hidden_; }
  const Eigen::VectorXd& hidden_bias() const { return b_hidden_; }
  const Eigen::VectorXd& output_weights() const { return w_out_; }
  double output_bias() const { return b_out_; }

  friend RankNetModel ranknet_train(const Eigen::MatrixXd&, const Eigen::VectorXd&,
                                    const RankNetConfig&);
  friend void ranknet_set_weights(RankNetModel&, Eigen::MatrixXd, Eigen::VectorXd,
                                  Eigen::VectorXd, double, RankNetConfig);

 private:
  RankNetConfig config_;
  Eigen::MatrixXd w_hidden_;  // hidden x input
  Eigen::VectorXd b_hidden_;
  Eigen::VectorXd w_out_;
  double b_out_ = 0.0;
  std::vector<double> loss_history_;  // mean pair loss per epoch
};

/// Pairwise cross-entropy for score gap o and target probability pbar:
/// -pbar * o + log(1 + e^o), evaluated stably.
double ranknet_pair_loss(double o, double pbar);

/// Trains on every ordered pair with distinct targets (oriented so the
/// preferred row comes first). Throws when no trainable pair exists.
RankNetModel ranknet_train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const RankNetConfig& config = {});

/// Used by model loading; not part of the training API.
void ranknet_set_weights(RankNetModel& model, Eigen::MatrixXd w_hidden,
                         Eigen::VectorXd b_hidden, Eigen::VectorXd w_out,
                         double b_out, RankNetConfig config);

/// Fraction of trainable pairs the model orders correctly.
double pairwise_accuracy(const RankNetModel& model, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& y);

/// Descending by score; ties broken by id ascending.
RankedList rank_by_score(const std::map<std::string, double>& scores);

nlohmann::json normalizer_to_json(const Normalizer& n);
Normalizer normalizer_from_json(const nlohmann::json& j);
nlohmann::json ridge_to_json(const RidgeModel& m, const Normalizer& n);
nlohmann::json ranknet_to_json(const RankNetModel& m, const Normalizer& n);

struct LoadedModel {
  std::string type;  // "ridge" | "ranknet"
  RidgeModel ridge;
  RankNetModel ranknet;
  Normalizer normalizer;
};

LoadedModel model_from_json(const nlohmann::json& j);

}  // namespace placerank
