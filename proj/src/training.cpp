#include "gfra/training.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gfra {

void TrainConfig::validate() const {
  if (max_epochs < 0) throw std::invalid_argument("max_epochs must be >= 0");
  if (max_val_checks < 1) throw std::invalid_argument("max_val_checks must be >= 1");
  if (!(min_gradient >= 0.0)) throw std::invalid_argument("min_gradient must be >= 0");
  fractions.validate();
}

Eigen::MatrixXd network_inputs(const Dataset& data, const std::vector<int>& rows,
                               const InputNormalizer& normalizer) {
  Eigen::MatrixXd sorted(data.num_aps(), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sorted.col(i) = sort_descending(data.energies.col(rows[i]));
  }
  return normalizer.apply_columns(sorted);
}

TrainResult train_scg(MlpModel model, const Dataset& data, const TrainConfig& config) {
  config.validate();
  if (model.input_size() != data.num_aps()) {
    throw std::invalid_argument("model input size does not match dataset M");
  }
  if (model.t_max() != data.t_max) throw std::invalid_argument("model t_max does not match dataset");
  const auto train_rows = data.rows_in(Split::kTrain);
  const auto val_rows = data.rows_in(Split::kValidation);
  if (train_rows.empty()) throw std::invalid_argument("training split is empty");
  if (val_rows.empty()) throw std::invalid_argument("validation split is empty");
  if (data.rows_in(Split::kTest).empty()) throw std::invalid_argument("test split is empty");

  const Eigen::MatrixXd train_x = network_inputs(data, train_rows, model.normalizer);
  const std::vector<int> train_y = data.labels_of(train_rows);
  const Eigen::MatrixXd val_x = network_inputs(data, val_rows, model.normalizer);
  const std::vector<int> val_y = data.labels_of(val_rows);
  const double train_n = static_cast<double>(train_rows.size());
  const double val_n = static_cast<double>(val_rows.size());

  MlpModel scratch = model;
  const Objective objective = [&](const Eigen::VectorXd& w, Eigen::VectorXd* grad) {
    scratch.params() = w;
    if (grad == nullptr) return loss_only(scratch, train_x, train_y) / train_n;
    LossGrad lg = loss_and_grad(scratch, train_x, train_y);
    *grad = lg.gradient / train_n;
    return lg.loss / train_n;
  };
  const auto validation_loss = [&](const Eigen::VectorXd& w) {
    scratch.params() = w;
    return loss_only(scratch, val_x, val_y) / val_n;
  };

  TrainResult res;
  Eigen::VectorXd best = model.params();
  double best_val = validation_loss(best);
  const double initial_train = objective(best, nullptr);
  if (!std::isfinite(initial_train) || !std::isfinite(best_val)) {
    throw std::runtime_error("training diverged: non-finite initial loss");
  }
  res.history.push_back({0, initial_train, best_val});
  int fails = 0;

  ScgOptions opts;
  opts.max_epochs = config.max_epochs;
  opts.min_gradient = config.min_gradient;
  opts.sigma = config.scg_sigma;
  opts.lambda_init = config.scg_lambda_init;

  const ScgResult scg = minimize_scg(
      objective, model.params(), opts,
      [&](int epoch, const Eigen::VectorXd& w, double value) {
        if (!std::isfinite(value)) throw std::runtime_error("training diverged: non-finite loss");
        const double v = validation_loss(w);
        res.history.push_back({epoch, value, v});
        if (v < best_val) {
          best_val = v;
          best = w;
          res.best_epoch = epoch;
          fails = 0;
        } else if (++fails >= config.max_val_checks) {
          res.stopped_on_validation = true;
          return true;
        }
        return false;
      });
  res.reason = scg.reason;
  model.params() = best;
  res.model = std::move(model);
  return res;
}

TrainResult train_classifier(const Dataset& data, const std::vector<int>& hidden,
                             const TrainConfig& config, RngStream rng) {
  std::vector<int> sizes{data.num_aps()};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(data.t_max + 1);
  MlpModel model = MlpModel::glorot(sizes, rng);
  model.antennas_per_ap = data.antennas_per_ap;

  const auto train_rows = data.rows_in(Split::kTrain);
  if (train_rows.empty()) throw std::invalid_argument("training split is empty");
  Eigen::MatrixXd sorted(data.num_aps(), static_cast<Eigen::Index>(train_rows.size()));
  for (std::size_t i = 0; i < train_rows.size(); ++i) {
    sorted.col(i) = sort_descending(data.energies.col(train_rows[i]));
  }
  model.normalizer = InputNormalizer::fit(config.normalizer, sorted);
  return train_scg(std::move(model), data, config);
}

}  // namespace gfra
