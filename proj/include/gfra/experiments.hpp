#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "gfra/config.hpp"
#include "gfra/dataset.hpp"
#include "gfra/mlp.hpp"
#include "gfra/rate_stats.hpp"
#include "gfra/ted.hpp"
#include "gfra/training.hpp"

namespace gfra {

inline constexpr const char* kVersion = "1.0.0";

/// Dataset for `config`, drawn from stream (seed, "dataset").
Dataset make_dataset(const ExperimentConfig& config);

/// Re-attaches the split a freshly generated dataset with this seed would get.
void assign_config_splits(Dataset& data, const ExperimentConfig& config);

struct TrainedModels {
  MlpModel dnn;
  TedModel ted;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  StopReason reason = StopReason::kMaxEpochs;
  bool stopped_on_validation = false;
};

/// Trains the MLP and fits T-ED on the same training split.
TrainedModels train_models(const ExperimentConfig& config, const Dataset& data);

struct ConfusionResult {
  Eigen::MatrixXi dnn_counts;
  Eigen::MatrixXi ted_counts;
  Eigen::MatrixXd dnn;  // row-normalized
  Eigen::MatrixXd ted;
};

ConfusionResult evaluate_confusion(const MlpModel& dnn, const TedModel& ted, const Dataset& data);

struct ConfusionRun {
  TrainedModels models;
  ConfusionResult confusion;
};

ConfusionRun run_confusion(const ExperimentConfig& config);

/// Rates of one scheme at one M_c, over every collided UE of every trial.
struct SchemeRates {
  std::string scheme;
  int m_c = 0;  // 0 for all_ap
  std::vector<double> rates;  // bit/s, trial order
  int missed = 0;             // samples decoded as missed detections
  int clamped = 0;            // shortlists clamped to M
  Ccdf ccdf;
  double likely95 = 0.0;
  double ergodic = 0.0;
};

struct RateReport {
  int trials = 0;
  int collided_samples = 0;
  std::vector<SchemeRates> schemes;

  /// nullptr if absent. all_ap ignores m_c.
  const SchemeRates* find(const std::string& scheme, int m_c) const;
};

/// Models may be null when the matching schemes are not configured.
/// Throws std::invalid_argument if a needed model is missing or was built
/// for another deployment.
RateReport run_rate_experiment(const ExperimentConfig& config, const MlpModel* dnn,
                               const TedModel* ted);

struct AsymptoticRow {
  int grid_side = 0;
  int num_aps = 0;
  double empirical = 0.0;   // E[signal] / E[collided interference]
  double asymptotic = 0.0;  // large-M limit from mean gains
  double rel_error = 0.0;
};

struct AsymptoticReport {
  std::vector<AsymptoticRow> rows;
  std::string note;  // set when the check is skipped
};

AsymptoticReport run_asymptotic_check(const ExperimentConfig& config);

void write_confusion_csv(const std::filesystem::path& path, const Eigen::MatrixXd& rates);
void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history);
void write_rate_outputs(const std::filesystem::path& dir, const RateReport& report);
void write_asymptotic_csv(const std::filesystem::path& path, const AsymptoticReport& report);

/// model.bin, ted.txt and history.csv into `dir`.
void save_trained_models(const std::filesystem::path& dir, const TrainedModels& models);

/// manifest.txt (command, seed, config hash, version) and config.txt.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const ExperimentConfig& config);

}  // namespace gfra
