#include "gfra/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace gfra {

std::string_view to_string(NormalizerKind kind) {
  switch (kind) {
    case NormalizerKind::kLogStandardize: return "log_standardize";
    case NormalizerKind::kLinearMinMax: return "linear_minmax";
  }
  return "unknown";
}

NormalizerKind normalizer_from_string(std::string_view name) {
  if (name == "log_standardize") return NormalizerKind::kLogStandardize;
  if (name == "linear_minmax") return NormalizerKind::kLinearMinMax;
  throw std::invalid_argument("unknown normalizer '" + std::string(name) + "'");
}

namespace {

Eigen::MatrixXd to_db(const Eigen::MatrixXd& linear) {
  const double floor = std::pow(10.0, kEnergyFloorDb / 10.0);
  return 10.0 * linear.array().max(floor).log10().matrix();
}

}  // namespace

InputNormalizer InputNormalizer::fit(NormalizerKind kind, const Eigen::MatrixXd& sorted) {
  if (sorted.cols() == 0) throw std::invalid_argument("cannot fit normalizer on empty data");
  InputNormalizer n;
  n.kind = kind;
  const Eigen::Index f = sorted.rows();
  if (kind == NormalizerKind::kLinearMinMax) {
    const double lo = sorted.minCoeff();
    const double hi = sorted.maxCoeff();
    const double half = hi > lo ? 0.5 * (hi - lo) : 1.0;
    n.shift = Eigen::VectorXd::Constant(f, 0.5 * (hi + lo));
    n.scale = Eigen::VectorXd::Constant(f, half);
    return n;
  }
  const Eigen::MatrixXd db = to_db(sorted);
  n.shift = db.rowwise().mean();
  n.scale.resize(f);
  for (Eigen::Index i = 0; i < f; ++i) {
    const double var = (db.row(i).array() - n.shift(i)).square().mean();
    n.scale(i) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return n;
}

InputNormalizer InputNormalizer::identity(int features) {
  InputNormalizer n;
  n.kind = NormalizerKind::kLinearMinMax;
  n.shift = Eigen::VectorXd::Zero(features);
  n.scale = Eigen::VectorXd::Ones(features);
  return n;
}

Eigen::VectorXd InputNormalizer::apply(const Eigen::VectorXd& sorted) const {
  return apply_columns(sorted);
}

Eigen::MatrixXd InputNormalizer::apply_columns(const Eigen::MatrixXd& sorted) const {
  if (sorted.rows() != shift.size()) {
    throw std::invalid_argument("normalizer expects " + std::to_string(shift.size()) +
                                " features, got " + std::to_string(sorted.rows()));
  }
  Eigen::MatrixXd x = kind == NormalizerKind::kLogStandardize ? to_db(sorted) : sorted;
  x.colwise() -= shift;
  return x.array().colwise() / scale.array();
}

Eigen::VectorXd sort_descending(const Eigen::VectorXd& energy) {
  Eigen::VectorXd out = energy;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

FeatureVector build_input(const Eigen::VectorXd& energy, const InputNormalizer& normalizer) {
  FeatureVector fv;
  fv.raw_sorted = sort_descending(energy);
  fv.values = normalizer.apply(fv.raw_sorted);
  return fv;
}

MlpModel::MlpModel(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("network needs at least input and output layers");
  for (int n : sizes_) {
    if (n < 1) throw std::invalid_argument("layer sizes must be positive");
  }
  Eigen::Index off = 0;
  for (std::size_t j = 0; j + 1 < sizes_.size(); ++j) {
    offsets_.push_back(off);
    off += static_cast<Eigen::Index>(sizes_[j + 1]) * sizes_[j] + sizes_[j + 1];
  }
  params_ = Eigen::VectorXd::Zero(off);
  normalizer = InputNormalizer::identity(sizes_.front());
}

MlpModel MlpModel::glorot(std::vector<int> layer_sizes, RngStream& rng) {
  MlpModel model(std::move(layer_sizes));
  for (int j = 0; j < model.num_weight_layers(); ++j) {
    const int fan_in = model.sizes_[j];
    const int fan_out = model.sizes_[j + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    auto w = model.weight(j);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-limit, limit);
  }
  return model;
}

Eigen::Map<Eigen::MatrixXd> MlpModel::weight(int j) {
  return {params_.data() + offsets_.at(j), sizes_[j + 1], sizes_[j]};
}

Eigen::Map<const Eigen::MatrixXd> MlpModel::weight(int j) const {
  return {params_.data() + offsets_.at(j), sizes_[j + 1], sizes_[j]};
}

Eigen::Map<Eigen::VectorXd> MlpModel::bias(int j) {
  return {params_.data() + offsets_.at(j) + static_cast<Eigen::Index>(sizes_[j + 1]) * sizes_[j],
          sizes_[j + 1]};
}

Eigen::Map<const Eigen::VectorXd> MlpModel::bias(int j) const {
  return {params_.data() + offsets_.at(j) + static_cast<Eigen::Index>(sizes_[j + 1]) * sizes_[j],
          sizes_[j + 1]};
}

namespace {

void check_inputs(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != model.input_size()) {
    throw std::invalid_argument("network expects " + std::to_string(model.input_size()) +
                                " inputs, got " + std::to_string(inputs.rows()));
  }
}

void sigmoid_inplace(Eigen::MatrixXd& z) {
  z = (1.0 + (-z.array()).exp()).inverse().matrix();
}

/// Hidden activations A_0..A_J (A_0 = inputs) and the output logits.
struct ForwardState {
  std::vector<Eigen::MatrixXd> activations;
  Eigen::MatrixXd logits;
};

ForwardState run_forward(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  check_inputs(model, inputs);
  ForwardState st;
  st.activations.reserve(model.num_weight_layers());
  st.activations.push_back(inputs);
  const int last = model.num_weight_layers() - 1;
  for (int j = 0; j < last; ++j) {
    Eigen::MatrixXd z = model.weight(j) * st.activations.back();
    z.colwise() += model.bias(j);
    sigmoid_inplace(z);
    st.activations.push_back(std::move(z));
  }
  st.logits = model.weight(last) * st.activations.back();
  st.logits.colwise() += model.bias(last);
  return st;
}

/// Column-wise log-sum-exp of the logits.
Eigen::RowVectorXd log_normalizers(const Eigen::MatrixXd& logits) {
  const Eigen::RowVectorXd mx = logits.colwise().maxCoeff();
  Eigen::RowVectorXd out(logits.cols());
  for (Eigen::Index q = 0; q < logits.cols(); ++q) {
    out(q) = mx(q) + std::log((logits.col(q).array() - mx(q)).exp().sum());
  }
  return out;
}

void check_labels(const MlpModel& model, const Eigen::MatrixXd& inputs,
                  std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != inputs.cols()) {
    throw std::invalid_argument("one label per input column required");
  }
  if (labels.empty()) throw std::invalid_argument("empty batch");
  for (int y : labels) {
    if (y < 0 || y >= model.num_classes()) throw std::invalid_argument("label out of range");
  }
}

}  // namespace

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  ForwardState st = run_forward(model, inputs);
  const Eigen::RowVectorXd lse = log_normalizers(st.logits);
  st.logits.rowwise() -= lse;
  return st.logits.array().exp().matrix();
}

Eigen::VectorXd forward(const MlpModel& model, const FeatureVector& input) {
  return forward_batch(model, input.values);
}

int argmax_class(const Eigen::VectorXd& probs) {
  int best = 0;
  for (int i = 1; i < probs.size(); ++i) {
    if (probs(i) > probs(best)) best = i;
  }
  return best;
}

int predict(const MlpModel& model, const FeatureVector& input) {
  return argmax_class(forward(model, input));
}

int predict_energy(const MlpModel& model, const Eigen::VectorXd& energy) {
  return predict(model, build_input(energy, model.normalizer));
}

double loss_only(const MlpModel& model, const Eigen::MatrixXd& inputs,
                 std::span<const int> labels) {
  check_labels(model, inputs, labels);
  const ForwardState st = run_forward(model, inputs);
  const Eigen::RowVectorXd lse = log_normalizers(st.logits);
  double loss = 0.0;
  for (Eigen::Index q = 0; q < inputs.cols(); ++q) loss += lse(q) - st.logits(labels[q], q);
  return loss;
}

LossGrad loss_and_grad(const MlpModel& model, const Eigen::MatrixXd& inputs,
                       std::span<const int> labels) {
  check_labels(model, inputs, labels);
  ForwardState st = run_forward(model, inputs);
  const Eigen::RowVectorXd lse = log_normalizers(st.logits);

  LossGrad out;
  for (Eigen::Index q = 0; q < inputs.cols(); ++q) out.loss += lse(q) - st.logits(labels[q], q);

  // dL/dlogits = softmax - onehot
  Eigen::MatrixXd delta = st.logits;
  delta.rowwise() -= lse;
  delta = delta.array().exp().matrix();
  for (Eigen::Index q = 0; q < inputs.cols(); ++q) delta(labels[q], q) -= 1.0;

  MlpModel grad_view(model.layer_sizes());
  for (int j = model.num_weight_layers() - 1; j >= 0; --j) {
    const Eigen::MatrixXd& a = st.activations[j];
    grad_view.weight(j).noalias() = delta * a.transpose();
    grad_view.bias(j) = delta.rowwise().sum();
    if (j == 0) break;
    Eigen::MatrixXd back = model.weight(j).transpose() * delta;
    delta = (back.array() * a.array() * (1.0 - a.array())).matrix();
  }
  out.gradient = std::move(grad_view.params());
  return out;
}

}  // namespace gfra
