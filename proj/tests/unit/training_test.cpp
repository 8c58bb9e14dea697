#include <doctest.h>

#include "gfra/training.hpp"

using namespace gfra;

namespace {

// Label = number of "on" entries among M = 3; energies are 1 +- noise or
// 0.01 +- noise, so the sorted input separates the classes.
Dataset counting_dataset(int copies, std::uint64_t seed) {
  RngStream r(seed, {"count"});
  Dataset d;
  d.t_max = 3;
  d.antennas_per_ap = 1;
  d.energies.resize(3, 8 * copies);
  int q = 0;
  for (int c = 0; c < copies; ++c) {
    for (int pattern = 0; pattern < 8; ++pattern, ++q) {
      int on = 0;
      for (int i = 0; i < 3; ++i) {
        const bool bit = (pattern >> i) & 1;
        on += bit;
        d.energies(i, q) = (bit ? 1.0 : 0.01) * (1.0 + 0.05 * r.uniform(-1.0, 1.0));
      }
      d.labels.push_back(on);
    }
  }
  d.split = assign_splits(d.size(), SplitFractions{}, r.child("split"));
  return d;
}

}  // namespace

TEST_SUITE("training") {

TEST_CASE("SCG learns XOR from most initializations") {
  Eigen::MatrixXd x(2, 4);
  x << 0, 0, 1, 1,
       0, 1, 0, 1;
  const std::vector<int> y{0, 1, 1, 0};
  int solved = 0;
  for (int init = 0; init < 10; ++init) {
    RngStream r(7, {"xor", init});
    MlpModel m = MlpModel::glorot({2, 4, 2}, r);
    ScgOptions opt;
    opt.max_epochs = 500;
    const auto objective = [&](const Eigen::VectorXd& w, Eigen::VectorXd* g) {
      m.params() = w;
      if (!g) return loss_only(m, x, y);
      LossGrad lg = loss_and_grad(m, x, y);
      *g = std::move(lg.gradient);
      return lg.loss;
    };
    const ScgResult res = minimize_scg(objective, m.params(), opt);
    m.params() = res.w;
    const Eigen::MatrixXd p = forward_batch(m, x);
    int correct = 0;
    for (int c = 0; c < 4; ++c) correct += argmax_class(p.col(c)) == y[c];
    solved += correct == 4;
  }
  CHECK(solved >= 9);
}

TEST_CASE("train_classifier fits a separable counting task") {
  const Dataset d = counting_dataset(40, 1);
  TrainConfig cfg;
  cfg.max_epochs = 300;
  const TrainResult res = train_classifier(d, {8}, cfg, RngStream(2, {"init"}));
  REQUIRE(!res.history.empty());
  int correct = 0;
  const auto test = d.rows_in(Split::kTest);
  for (int q : test) correct += predict_energy(res.model, d.energies.col(q)) == d.labels[q];
  CHECK(correct == static_cast<int>(test.size()));

  // Returned parameters are the best-validation ones.
  double best = res.history.front().val_loss;
  for (const auto& e : res.history) best = std::min(best, e.val_loss);
  const auto& at_best = res.history[res.best_epoch];
  CHECK(at_best.val_loss == doctest::Approx(best));
  CHECK(res.history.front().epoch == 0);
  CHECK(at_best.train_loss <= res.history.front().train_loss);
}

TEST_CASE("validation patience stops training") {
  const Dataset d = counting_dataset(40, 3);
  TrainConfig cfg;
  cfg.max_epochs = 5000;
  cfg.min_gradient = 0.0;
  cfg.max_val_checks = 2;
  const TrainResult res = train_classifier(d, {8}, cfg, RngStream(4, {"init"}));
  if (res.stopped_on_validation) {
    CHECK(res.history.back().epoch - res.best_epoch == 2);
  } else {
    CHECK(res.reason != StopReason::kMaxEpochs);
  }
}

TEST_CASE("empty splits and bad configs throw") {
  Dataset d = counting_dataset(2, 5);
  for (auto& s : d.split) s = Split::kTrain;
  TrainConfig cfg;
  CHECK_THROWS_AS(train_classifier(d, {4}, cfg, RngStream(1, {"x"})), std::invalid_argument);
  cfg.max_val_checks = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}
