#include <doctest.h>

#include <cmath>

#include "gfra/experiments.hpp"

using namespace gfra;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.grid_rows = c.grid_cols = 3;
  c.train.q_samples = 600;
  c.train.max_epochs = 15;
  c.hidden_layers = {8};
  c.mc_list = {1, 2};
  c.trials = 30;
  c.kmeans_restarts = 2;
  c.traffic.activation_prob = 0.05;  // more collisions per trial
  c.asym_grid_sides = {3, 6};
  c.asym_draws = 50;
  c.threads = 1;
  return c;
}

const TrainedModels& small_models() {
  static const TrainedModels models = [] {
    const ExperimentConfig c = small_config();
    return train_models(c, make_dataset(c));
  }();
  return models;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("dataset splits can be re-attached") {
  const ExperimentConfig c = small_config();
  const Dataset a = make_dataset(c);
  Dataset b = a;
  b.split.clear();
  assign_config_splits(b, c);
  CHECK(a.split == b.split);
  CHECK(a.size() == 600);
}

TEST_CASE("training produces consistent models") {
  const TrainedModels& m = small_models();
  CHECK(m.dnn.input_size() == 9);
  CHECK(m.dnn.num_classes() == 5);
  CHECK(m.ted.class_means.size() == 5);
  CHECK(!m.history.empty());
  const ConfusionResult r = evaluate_confusion(m.dnn, m.ted, make_dataset(small_config()));
  for (Eigen::Index b = 0; b < r.dnn.rows(); ++b) {
    const double s = r.dnn.row(b).sum();
    CHECK((s == 0.0 || std::abs(s - 1.0) < 1e-12));
  }
  CHECK(r.dnn_counts.sum() == 60);
}

TEST_CASE("zero trials give an empty report") {
  ExperimentConfig c = small_config();
  c.trials = 0;
  const RateReport r = run_rate_experiment(c, &small_models().dnn, &small_models().ted);
  CHECK(r.collided_samples == 0);
  for (const auto& s : r.schemes) CHECK(s.rates.empty());
}

TEST_CASE("rates do not depend on the thread count") {
  ExperimentConfig c = small_config();
  const RateReport one = run_rate_experiment(c, &small_models().dnn, &small_models().ted);
  c.threads = 3;
  const RateReport three = run_rate_experiment(c, &small_models().dnn, &small_models().ted);
  REQUIRE(one.schemes.size() == three.schemes.size());
  CHECK(one.collided_samples > 0);
  // all_ap once, four schemes at each of two M_c values.
  CHECK(one.schemes.size() == 1 + 4 * 2);
  for (std::size_t i = 0; i < one.schemes.size(); ++i) {
    CHECK(one.schemes[i].rates == three.schemes[i].rates);
    CHECK(static_cast<int>(one.schemes[i].rates.size()) == one.collided_samples);
  }
  const SchemeRates* genie = one.find(kSchemeGenie, 2);
  REQUIRE(genie != nullptr);
  CHECK(genie->missed == 0);
  CHECK(one.find(kSchemeAllAp, 99) != nullptr);
  CHECK(one.find(kSchemeGenie, 99) == nullptr);
}

TEST_CASE("missing models are rejected") {
  const ExperimentConfig c = small_config();
  CHECK_THROWS_AS(run_rate_experiment(c, nullptr, &small_models().ted), std::invalid_argument);
  CHECK_THROWS_AS(run_rate_experiment(c, &small_models().dnn, nullptr), std::invalid_argument);
  ExperimentConfig genie_only = c;
  genie_only.schemes = {kSchemeGenie, kSchemeAllAp};
  CHECK_NOTHROW(run_rate_experiment(genie_only, nullptr, nullptr));
  ExperimentConfig bigger = c;
  bigger.grid_rows = 4;
  CHECK_THROWS_AS(run_rate_experiment(bigger, &small_models().dnn, &small_models().ted),
                  std::invalid_argument);
}

TEST_CASE("asymptotic check") {
  ExperimentConfig c = small_config();
  c.pathloss.shadow_sigma_db = 0.0;
  // Target and collider mirror each other about the area centre.
  c.asym_target = {250.0, 500.0};
  c.asym_colliders = {{750.0, 500.0}};
  const AsymptoticReport r = run_asymptotic_check(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].num_aps == 9);
  CHECK(r.rows[1].num_aps == 36);
  for (const auto& row : r.rows) CHECK(row.asymptotic == doctest::Approx(1.0));
  CHECK(r.note.empty());

  c.asym_colliders.clear();
  const AsymptoticReport skipped = run_asymptotic_check(c);
  CHECK(skipped.rows.empty());
  CHECK(!skipped.note.empty());
}

}
