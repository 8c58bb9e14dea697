#pragma once

#include <Eigen/Dense>
#include <span>
#include <string_view>
#include <vector>

#include "gfra/scene.hpp"

namespace gfra {

enum class NormalizerKind {
  /// 10*log10(E) floored at -250 dB, then per-feature standardization.
  kLogStandardize,
  /// Global affine map of linear energies onto [-1, 1].
  kLinearMinMax,
};

std::string_view to_string(NormalizerKind kind);
NormalizerKind normalizer_from_string(std::string_view name);

/// x' = (f(x) - shift) / scale per feature, f = dB or identity by kind.
struct InputNormalizer {
  NormalizerKind kind = NormalizerKind::kLogStandardize;
  Eigen::VectorXd shift;
  Eigen::VectorXd scale;

  /// `sorted` holds one sorted energy vector per column.
  static InputNormalizer fit(NormalizerKind kind, const Eigen::MatrixXd& sorted);
  static InputNormalizer identity(int features);

  int features() const { return static_cast<int>(shift.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& sorted) const;
  Eigen::MatrixXd apply_columns(const Eigen::MatrixXd& sorted) const;
};

inline constexpr double kEnergyFloorDb = -250.0;

Eigen::VectorXd sort_descending(const Eigen::VectorXd& energy);

/// Classifier input built from one per-AP energy vector.
struct FeatureVector {
  Eigen::VectorXd raw_sorted;  // descending
  Eigen::VectorXd values;      // normalized network input
};

FeatureVector build_input(const Eigen::VectorXd& energy, const InputNormalizer& normalizer);

/// Fully connected sigmoid network with a softmax output layer.
///
/// All weights and biases live in one flat parameter vector so optimizers
/// can treat the network as a function of a single vector. Layer j stores
/// W_j (N_{j+1} x N_j, column-major) followed by b_j.
class MlpModel {
 public:
  MlpModel() = default;
  explicit MlpModel(std::vector<int> layer_sizes);

  /// Uniform +-sqrt(6 / (fan_in + fan_out)) weights, zero biases.
  static MlpModel glorot(std::vector<int> layer_sizes, RngStream& rng);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int num_weight_layers() const { return static_cast<int>(sizes_.size()) - 1; }
  int input_size() const { return sizes_.front(); }
  int num_classes() const { return sizes_.back(); }
  int t_max() const { return num_classes() - 1; }
  Eigen::Index num_params() const { return params_.size(); }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }

  Eigen::Map<Eigen::MatrixXd> weight(int j);
  Eigen::Map<const Eigen::MatrixXd> weight(int j) const;
  Eigen::Map<Eigen::VectorXd> bias(int j);
  Eigen::Map<const Eigen::VectorXd> bias(int j) const;

  InputNormalizer normalizer;
  int antennas_per_ap = 0;  // metadata only

 private:
  std::vector<int> sizes_;
  std::vector<Eigen::Index> offsets_;  // start of W_j; b_j follows it
  Eigen::VectorXd params_;
};

/// Class probabilities for normalized inputs, one column per sample.
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs);
Eigen::VectorXd forward(const MlpModel& model, const FeatureVector& input);

/// Index of the largest entry; ties go to the smaller index.
int argmax_class(const Eigen::VectorXd& probs);

int predict(const MlpModel& model, const FeatureVector& input);
/// Sort, normalize with the model's normalizer, classify.
int predict_energy(const MlpModel& model, const Eigen::VectorXd& energy);

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd gradient;  // same layout as MlpModel::params()
};

/// Summed cross-entropy over the batch against one-hot targets, and its
/// gradient by backpropagation. `inputs` are normalized, one column each.
LossGrad loss_and_grad(const MlpModel& model, const Eigen::MatrixXd& inputs,
                       std::span<const int> labels);
double loss_only(const MlpModel& model, const Eigen::MatrixXd& inputs,
                 std::span<const int> labels);

}  // namespace gfra
