#pragma once

#include <vector>

#include "gfra/dataset.hpp"
#include "gfra/mlp.hpp"
#include "gfra/scg.hpp"

namespace gfra {

struct TrainConfig {
  int max_epochs = 1000;
  double min_gradient = 1e-6;
  int max_val_checks = 8;
  double scg_sigma = 1e-4;
  double scg_lambda_init = 1e-6;
  SplitFractions fractions;
  int q_samples = 100000;
  NormalizerKind normalizer = NormalizerKind::kLogStandardize;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean cross-entropy per sample
  double val_loss = 0.0;
};

struct TrainResult {
  MlpModel model;  // parameters from the best-validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  StopReason reason = StopReason::kMaxEpochs;
  bool stopped_on_validation = false;
};

/// Full-batch SCG on the mean training cross-entropy. The model's
/// normalizer must already be set; validation loss is checked every epoch
/// and training stops after `max_val_checks` consecutive non-improvements.
TrainResult train_scg(MlpModel model, const Dataset& data, const TrainConfig& config);

/// Fits the input normalizer on the training split, initializes weights,
/// then runs train_scg. Layer sizes are [M, hidden..., t_max + 1].
TrainResult train_classifier(const Dataset& data, const std::vector<int>& hidden,
                             const TrainConfig& config, RngStream rng);

/// Sorted-then-normalized inputs for the given rows, one column each.
Eigen::MatrixXd network_inputs(const Dataset& data, const std::vector<int>& rows,
                               const InputNormalizer& normalizer);

}  // namespace gfra
