#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace gfra {

/// How T-ED maps training energies onto [-1, 1].
enum class TedScaling {
  kPerPosition,  // separate min/max for each entry of the sorted energy vector
  kGlobal,       // one min/max over all training energies
};

std::string_view to_string(TedScaling scaling);
TedScaling ted_scaling_from_string(std::string_view name);

/// Threshold energy detection: classifies a preamble by its average
/// per-AP energy after an affine map of the sorted energies onto [-1, 1].
///
/// thresholds has t_max + 2 entries: thresholds[0] = -1,
/// thresholds[b] = (class_means[b-1] + class_means[b]) / 2 for b = 1..t_max,
/// thresholds[t_max + 1] = +inf. Class b covers (thresholds[b], thresholds[b+1]].
struct TedModel {
  TedScaling scaling = TedScaling::kPerPosition;
  Eigen::VectorXd norm_min;  // M entries, or one for kGlobal
  Eigen::VectorXd norm_max;
  int t_max = 4;
  std::vector<double> class_means;
  std::vector<double> thresholds;

  /// Average normalized energy per AP for one raw energy vector.
  double score(const Eigen::VectorXd& energy) const;
};

/// Midpoints between adjacent class means, framed by -1 and +inf.
std::vector<double> ted_thresholds(const std::vector<double>& class_means);

/// `energies` holds one raw energy vector per column (order of entries
/// within a column is irrelevant). Every class 0..t_max needs a sample.

TedModel fit_ted(const Eigen::MatrixXd& energies, std::span<const int> labels, int t_max,
                 TedScaling scaling = TedScaling::kPerPosition);

int predict_ted(const TedModel& model, const Eigen::VectorXd& energy);
int classify_score(const TedModel& model, double score);

using EnergyClassifier = std::function<int(const Eigen::VectorXd& energy)>;

/// Row-normalized confusion matrix: entry (b, b_hat) is the fraction of
/// true-b samples predicted as b_hat. Rows for classes with no samples stay
/// zero. Predictions outside 0..t_max are clamped into range.
Eigen::MatrixXd confusion_matrix(const EnergyClassifier& predictor, const Eigen::MatrixXd& energies,
                                 std::span<const int> labels, int t_max);

/// Raw counts behind confusion_matrix.
Eigen::MatrixXi confusion_counts(const EnergyClassifier& predictor, const Eigen::MatrixXd& energies,
                                 std::span<const int> labels, int t_max);

/// P(|b_hat - b| <= 1 | b) per class from a row-normalized matrix.
Eigen::VectorXd within_one_rates(const Eigen::MatrixXd& confusion);

}  // namespace gfra
