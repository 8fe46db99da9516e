#include "placerank/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "placerank/rng.hpp"

namespace placerank {

Normalizer Normalizer::fit(const Eigen::MatrixXd& train) {
  if (train.rows() < 2)
    throw std::invalid_argument("normalizer needs at least 2 training rows");
  Normalizer n;
  n.mean_ = train.colwise().mean().transpose();
  Eigen::MatrixXd centered = train.rowwise() - n.mean_.transpose();
  // Population convention: divide by n, not n - 1.
  n.std_ = (centered.array().square().colwise().sum() /
            static_cast<double>(train.rows()))
               .sqrt()
               .matrix()
               .transpose();
  return n;
}

Normalizer Normalizer::from_params(Eigen::VectorXd mean, Eigen::VectorXd stddev) {
  Normalizer n;
  n.mean_ = std::move(mean);
  n.std_ = std::move(stddev);
  return n;
}

Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& rows) const {
  if (rows.cols() != mean_.size())
    throw std::invalid_argument("normalizer dimension mismatch");
  Eigen::MatrixXd out(rows.rows(), rows.cols());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    if (std_(c) > 0.0)
      out.col(c) = (rows.col(c).array() - mean_(c)) / std_(c);
    else
      out.col(c).setZero();
  }
  return out;
}

Eigen::VectorXd Normalizer::apply_row(const Eigen::VectorXd& row) const {
  return apply(row.transpose()).row(0).transpose();
}

Normalizer fit_normalizer(std::span<const FeatureVector> train) {
  return Normalizer::fit(feature_matrix(train));
}

Eigen::MatrixXd feature_matrix(std::span<const FeatureVector> vectors,
                               std::span<const int> slots) {
  std::vector<int> cols(slots.begin(), slots.end());
  if (cols.empty())
    for (int i = 0; i < static_cast<int>(kFeatureCount); ++i) cols.push_back(i);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(vectors.size()),
                    static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      x(r, c) = vectors[static_cast<std::size_t>(r)].x[static_cast<std::size_t>(cols[static_cast<std::size_t>(c)])];
  return x;
}

RidgeModel ridge_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     double gamma) {
  if (x.rows() != y.size() || x.rows() < 1)
    throw std::invalid_argument("ridge_fit: shape mismatch or empty input");
  if (gamma < 0.0) throw std::invalid_argument("ridge_fit: gamma must be >= 0");

  const Eigen::Index p = x.cols();
  // Augment with a constant column for the intercept; the penalty matrix
  // leaves that coordinate free.
  Eigen::MatrixXd design(x.rows(), p + 1);
  design.leftCols(p) = x;
  design.col(p).setOnes();

  Eigen::MatrixXd normal = design.transpose() * design;
  for (Eigen::Index i = 0; i < p; ++i) normal(i, i) += gamma;

  Eigen::VectorXd rhs = design.transpose() * y;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  if (!lu.isInvertible()) {
    if (gamma == 0.0) throw SingularSystemError();
    throw Error("ridge_fit: normal equations unexpectedly singular");
  }
  Eigen::VectorXd solution = lu.solve(rhs);

  RidgeModel model;
  model.weights = solution.head(p);
  model.intercept = solution(p);
  model.gamma = gamma;
  return model;
}

double ridge_predict(const RidgeModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.weights.size())
    throw std::invalid_argument("ridge_predict: dimension mismatch");
  return model.weights.dot(x) + model.intercept;
}

double ranknet_pair_loss(double o, double pbar) {
  // log(1 + e^o) computed without overflow for large |o|.
  const double softplus = o > 0.0 ? o + std::log1p(std::exp(-o))
                                  : std::log1p(std::exp(o));
  return -pbar * o + softplus;
}

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

struct PairList {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;  // (high, low)
};

PairList trainable_pairs(const Eigen::VectorXd& y) {
  PairList list;
  for (Eigen::Index i = 0; i < y.size(); ++i)
    for (Eigen::Index j = 0; j < y.size(); ++j)
      if (y(i) > y(j)) list.pairs.emplace_back(i, j);
  return list;
}

}  // namespace

double RankNetModel::score(const Eigen::VectorXd& x) const {
  if (x.size() != w_hidden_.cols())
    throw std::invalid_argument("ranknet score: dimension mismatch");
  Eigen::VectorXd hidden = (w_hidden_ * x + b_hidden_).unaryExpr([](double v) {
    return sigmoid(v);
  });
  return w_out_.dot(hidden) + b_out_;
}

RankNetModel ranknet_train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const RankNetConfig& config) {
  if (x.rows() != y.size() || x.rows() < 2)
    throw std::invalid_argument("ranknet_train: need at least 2 rows");
  const PairList pairs = trainable_pairs(y);
  if (pairs.pairs.empty())
    throw std::invalid_argument("ranknet_train: all targets equal, no trainable pairs");

  const Eigen::Index in_dim = x.cols();
  const Eigen::Index h = config.hidden_units;

  RankNetModel model;
  model.config_ = config;
  Rng rng(config.seed);
  auto init = [&rng]() { return rng.uniform(-0.5, 0.5); };
  model.w_hidden_ = Eigen::MatrixXd::NullaryExpr(h, in_dim, init);
  model.b_hidden_ = Eigen::VectorXd::NullaryExpr(h, init);
  model.w_out_ = Eigen::VectorXd::NullaryExpr(h, init);
  model.b_out_ = 0.0;

  // Cached per-row forward pass, refreshed each epoch.
  Eigen::MatrixXd hidden(x.rows(), h);
  Eigen::VectorXd scores(x.rows());

  const double pair_count = static_cast<double>(pairs.pairs.size());

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      Eigen::VectorXd a = (model.w_hidden_ * x.row(r).transpose() + model.b_hidden_)
                              .unaryExpr([](double v) { return sigmoid(v); });
      hidden.row(r) = a.transpose();
      scores(r) = model.w_out_.dot(a) + model.b_out_;
    }

    // Pair gradients factored onto rows: dC/do = sigmoid(o) - 1 for each
    // preferred/other pair adds +d to the preferred row and -d to the other,
    // so one backprop per row covers every pair touching it.
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(x.rows());
    double loss = 0.0;
    for (const auto& [hi, lo] : pairs.pairs) {
      const double o = scores(hi) - scores(lo);
      loss += ranknet_pair_loss(o, 1.0);
      const double dloss = sigmoid(o) - 1.0;
      lambda(hi) += dloss;
      lambda(lo) -= dloss;
    }

    Eigen::MatrixXd grad_w_hidden = Eigen::MatrixXd::Zero(h, in_dim);
    Eigen::VectorXd grad_b_hidden = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd grad_w_out = Eigen::VectorXd::Zero(h);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      if (lambda(r) == 0.0) continue;
      const Eigen::VectorXd a = hidden.row(r).transpose();
      grad_w_out += lambda(r) * a;
      // b_out cancels in o = H(A) - H(B); it stays untrained.
      Eigen::VectorXd da =
          (lambda(r) * model.w_out_.array() * a.array() * (1.0 - a.array()))
              .matrix();
      grad_w_hidden += da * x.row(r);
      grad_b_hidden += da;
    }

    model.loss_history_.push_back(loss / pair_count);

    const double step = config.learning_rate / pair_count;
    model.w_hidden_ -= step * grad_w_hidden;
    model.b_hidden_ -= step * grad_b_hidden;
    model.w_out_ -= step * grad_w_out;
  }

  return model;
}

void ranknet_set_weights(RankNetModel& model, Eigen::MatrixXd w_hidden,
                         Eigen::VectorXd b_hidden, Eigen::VectorXd w_out,
                         double b_out, RankNetConfig config) {
  model.w_hidden_ = std::move(w_hidden);
  model.b_hidden_ = std::move(b_hidden);
  model.w_out_ = std::move(w_out);
  model.b_out_ = b_out;
  model.config_ = config;
}

double pairwise_accuracy(const RankNetModel& model, const Eigen::MatrixXd& x,
                         const Eigen::VectorXd& y) {
  const PairList pairs = trainable_pairs(y);
  if (pairs.pairs.empty()) return 1.0;
  Eigen::VectorXd scores(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    scores(r) = model.score(x.row(r).transpose());
  std::size_t correct = 0;
  for (const auto& [hi, lo] : pairs.pairs)
    if (scores(hi) > scores(lo)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(pairs.pairs.size());
}

RankedList rank_by_score(const std::map<std::string, double>& scores) {
  std::vector<std::pair<std::string, double>> items(scores.begin(), scores.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  RankedList list;
  list.ids.reserve(items.size());
  for (auto& [id, score] : items) list.ids.push_back(std::move(id));
  return list;
}

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
  return m;
}

}  // namespace

nlohmann::json normalizer_to_json(const Normalizer& n) {
  return {{"mean", vector_to_json(n.mean())}, {"stddev", vector_to_json(n.stddev())}};
}

Normalizer normalizer_from_json(const nlohmann::json& j) {
  return Normalizer::from_params(vector_from_json(j.at("mean")),
                                 vector_from_json(j.at("stddev")));
}

nlohmann::json ridge_to_json(const RidgeModel& m, const Normalizer& n) {
  return {{"type", "ridge"},
          {"weights", vector_to_json(m.weights)},
          {"intercept", m.intercept},
          {"normalizer", normalizer_to_json(n)},
          {"config", {{"gamma", m.gamma}}},
          {"seed", 0}};
}

nlohmann::json ranknet_to_json(const RankNetModel& m, const Normalizer& n) {
  return {{"type", "ranknet"},
          {"weights",
           {{"hidden", matrix_to_json(m.hidden_weights())},
            {"hidden_bias", vector_to_json(m.hidden_bias())},
            {"output", vector_to_json(m.output_weights())},
            {"output_bias", m.output_bias()}}},
          {"normalizer", normalizer_to_json(n)},
          {"config",
           {{"hidden_units", m.config().hidden_units},
            {"learning_rate", m.config().learning_rate},
            {"epochs", m.config().epochs}}},
          {"seed", m.config().seed}};
}

LoadedModel model_from_json(const nlohmann::json& j) {
  LoadedModel loaded;
  loaded.type = j.at("type").get<std::string>();
  loaded.normalizer = normalizer_from_json(j.at("normalizer"));
  if (loaded.type == "ridge") {
    loaded.ridge.weights = vector_from_json(j.at("weights"));
    loaded.ridge.intercept = j.at("intercept").get<double>();
    loaded.ridge.gamma = j.at("config").at("gamma").get<double>();
  } else if (loaded.type == "ranknet") {
    RankNetConfig config;
    config.hidden_units = j.at("config").at("hidden_units").get<int>();
    config.learning_rate = j.at("config").at("learning_rate").get<double>();
    config.epochs = j.at("config").at("epochs").get<int>();
    config.seed = j.at("seed").get<std::uint64_t>();
    ranknet_set_weights(loaded.ranknet, matrix_from_json(j.at("weights").at("hidden")),
                        vector_from_json(j.at("weights").at("hidden_bias")),
                        vector_from_json(j.at("weights").at("output")),
                        j.at("weights").at("output_bias").get<double>(), config);
  } else {
    throw Error("unknown model type: " + loaded.type);
  }
  return loaded;
}

}  // namespace placerank
