#include "gfra/ted.hpp"

#include "gfra/mlp.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace gfra {

std::string_view to_string(TedScaling scaling) {
  return scaling == TedScaling::kPerPosition ? "per_position" : "global";
}

TedScaling ted_scaling_from_string(std::string_view name) {
  if (name == "per_position") return TedScaling::kPerPosition;
  if (name == "global") return TedScaling::kGlobal;
  throw std::invalid_argument("unknown T-ED scaling '" + std::string(name) + "'");
}

double TedModel::score(const Eigen::VectorXd& energy) const {
  const Eigen::VectorXd sorted = sort_descending(energy);
  if (scaling == TedScaling::kGlobal) {
    const double half = 0.5 * (norm_max(0) - norm_min(0));
    const double mid = 0.5 * (norm_max(0) + norm_min(0));
    return ((sorted.array() - mid) / half).mean();
  }
  if (sorted.size() != norm_min.size()) {
    throw std::invalid_argument("energy length does not match the T-ED model");
  }
  const Eigen::ArrayXd half = 0.5 * (norm_max - norm_min).array();
  const Eigen::ArrayXd mid = 0.5 * (norm_max + norm_min).array();
  return ((sorted.array() - mid) / half).mean();
}

std::vector<double> ted_thresholds(const std::vector<double>& class_means) {
  const std::size_t n = class_means.size();
  std::vector<double> th(n + 1);
  th[0] = -1.0;
  for (std::size_t b = 1; b < n; ++b) th[b] = 0.5 * (class_means[b - 1] + class_means[b]);
  th[n] = std::numeric_limits<double>::infinity();
  return th;
}

TedModel fit_ted(const Eigen::MatrixXd& energies, std::span<const int> labels, int t_max,
                 TedScaling scaling) {
  if (static_cast<Eigen::Index>(labels.size()) != energies.cols()) {
    throw std::invalid_argument("one label per energy column required");
  }
  if (energies.size() == 0) throw std::invalid_argument("no training energies");
  TedModel model;
  model.t_max = t_max;
  model.scaling = scaling;
  if (scaling == TedScaling::kGlobal) {
    model.norm_min = Eigen::VectorXd::Constant(1, energies.minCoeff());
    model.norm_max = Eigen::VectorXd::Constant(1, energies.maxCoeff());
  } else {
    Eigen::MatrixXd sorted(energies.rows(), energies.cols());
    for (Eigen::Index q = 0; q < energies.cols(); ++q) sorted.col(q) = sort_descending(energies.col(q));
    model.norm_min = sorted.rowwise().minCoeff();
    model.norm_max = sorted.rowwise().maxCoeff();
  }
  if (!((model.norm_max - model.norm_min).array() > 0.0).all()) {
    throw std::invalid_argument("training energies are constant; cannot normalize");
  }

  std::vector<double> sums(t_max + 1, 0.0);
  std::vector<int> counts(t_max + 1, 0);
  for (Eigen::Index q = 0; q < energies.cols(); ++q) {
    const int b = labels[q];
    if (b < 0 || b > t_max) throw std::invalid_argument("label out of range");
    sums[b] += model.score(energies.col(q));
    ++counts[b];
  }
  model.class_means.resize(t_max + 1);
  for (int b = 0; b <= t_max; ++b) {
    if (counts[b] == 0) {
      throw std::invalid_argument("no training samples for multiplicity class " +
                                  std::to_string(b));
    }
    model.class_means[b] = sums[b] / counts[b];
  }
  model.thresholds = ted_thresholds(model.class_means);
  return model;
}

int classify_score(const TedModel& model, double score) {
  // Scores at or below Th_0 (below the training minimum) go to class 0.
  for (int b = 0; b < model.t_max; ++b) {
    if (score <= model.thresholds[b + 1]) return b;
  }
  return model.t_max;
}

int predict_ted(const TedModel& model, const Eigen::VectorXd& energy) {
  return classify_score(model, model.score(energy));
}

Eigen::MatrixXi confusion_counts(const EnergyClassifier& predictor, const Eigen::MatrixXd& energies,
                                 std::span<const int> labels, int t_max) {
  if (static_cast<Eigen::Index>(labels.size()) != energies.cols()) {
    throw std::invalid_argument("one label per energy column required");
  }
  if (labels.empty()) throw std::invalid_argument("confusion matrix needs a nonempty test set");
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(t_max + 1, t_max + 1);
  for (Eigen::Index q = 0; q < energies.cols(); ++q) {
    const int b = labels[q];
    if (b < 0 || b > t_max) throw std::invalid_argument("label out of range");
    const int b_hat = std::clamp(predictor(energies.col(q)), 0, t_max);
    ++counts(b, b_hat);
  }
  return counts;
}

Eigen::MatrixXd confusion_matrix(const EnergyClassifier& predictor, const Eigen::MatrixXd& energies,
                                 std::span<const int> labels, int t_max) {
  const Eigen::MatrixXi counts = confusion_counts(predictor, energies, labels, t_max);
  Eigen::MatrixXd rates = counts.cast<double>();
  for (Eigen::Index b = 0; b < rates.rows(); ++b) {
    const double total = rates.row(b).sum();
    if (total > 0.0) rates.row(b) /= total;
  }
  return rates;
}

Eigen::VectorXd within_one_rates(const Eigen::MatrixXd& confusion) {
  const Eigen::Index n = confusion.rows();
  Eigen::VectorXd out(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    double s = 0.0;
    for (Eigen::Index c = std::max<Eigen::Index>(0, b - 1); c <= std::min(n - 1, b + 1); ++c) {
      s += confusion(b, c);
    }
    out(b) = s;
  }
  return out;
}

}  // namespace gfra
