#include <doctest.h>

#include <cmath>
#include <numeric>

#include "gfra/airlink.hpp"

using namespace gfra;

namespace {

double max_cross_correlation(const PreamblePool& pool) {
  const Eigen::MatrixXcd gram = pool.sequences.adjoint() * pool.sequences;
  const Eigen::MatrixXcd expected =
      static_cast<double>(pool.length()) * Eigen::MatrixXcd::Identity(pool.length(), pool.length());
  return (gram - expected).cwiseAbs().maxCoeff();
}

SlotRealization test_slot(std::uint64_t seed, int users, int pool, int rows = 3, int s = 2) {
  const Deployment d = make_grid_deployment(rows, rows, AreaSpec{}, s);
  RngStream r(seed, {"slot"});
  auto pos = place_ues_uniform(users, d.area, r);
  std::vector<int> picks(users);
  for (int u = 0; u < users; ++u) picks[u] = u % pool;
  return make_slot(d, pos, picks, pool, PathLossParams{}, r);
}

}  // namespace

TEST_SUITE("airlink") {

TEST_CASE("Zadoff-Chu pools are orthogonal with unit-modulus entries") {
  for (int length : {20, 13, 12, 7}) {
    for (int root : {1, 3, 7}) {
      if (std::gcd(root, length) != 1) continue;
      CAPTURE(length);
      CAPTURE(root);
      const PreamblePool pool = make_zc_pool(length, root);
      CHECK(max_cross_correlation(pool) < 1e-9);
      CHECK((pool.sequences.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
      // Preamble l is the base sequence shifted by l.
      CHECK(std::abs(pool.sequences(0, 1) - pool.sequences(1, 0)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(make_zc_pool(20, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_zc_pool(0, 1), std::invalid_argument);
}

TEST_CASE("a fixed preamble is empty with probability about exp(-1)") {
  const Deployment d = make_grid_deployment(1, 1, AreaSpec{}, 1);
  PathLossParams p;
  p.shadow_sigma_db = 0.0;
  const TrafficSpec t;
  const int n = 20000;
  int empty = 0, max_ok = 0;
  for (int i = 0; i < n; ++i) {
    RngStream r(9, {"slot", i});
    const SlotRealization s = simulate_slot(d, t, p, r);
    if (s.users_of(0).empty()) ++empty;
    int worst = 0;
    for (int l = 0; l < t.pool_size; ++l) {
      worst = std::max(worst, static_cast<int>(s.users_of(l).size()));
    }
    if (worst <= 4) ++max_ok;
  }
  // Binomial(2000, 5e-4) at 0 is 0.3678; sd of the estimate is 0.0034.
  CHECK(std::abs(static_cast<double>(empty) / n - 0.3678) < 0.012);
  CHECK(static_cast<double>(max_ok) / n > 0.9);
}

TEST_CASE("full received block and direct synthesis agree") {
  const RadioParams radio;
  for (int trial = 0; trial < 5; ++trial) {
    const SlotRealization slot = test_slot(100 + trial, 7, 4);
    const PreamblePool pool = make_zc_pool(4, 3);
    RngStream r(200 + trial, {"noise"});
    const double sigma = std::sqrt(db_to_linear(noise_power_dbm(radio)));
    Eigen::MatrixXcd noise(slot.channel.g.rows(), 4);
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = sigma * r.complex_normal();
    for (int l = 0; l < 4; ++l) {
      const auto full = matched_filter_full(slot, pool, l, radio, noise);
      const auto direct = observe_preamble(slot, l, tx_snr_linear(radio),
                                           unit_noise_from_block(pool, l, radio, noise));
      const double scale = std::max(1e-300, full.filtered.cwiseAbs().maxCoeff());
      CHECK((full.filtered - direct.filtered).cwiseAbs().maxCoeff() / scale < 1e-10);
      CHECK(full.true_multiplicity == direct.true_multiplicity);
    }
  }
}

TEST_CASE("noiseless observation is the sum of colliding channels") {
  const SlotRealization slot = test_slot(1, 5, 2);
  const auto obs = observe_preamble(slot, 0, kInfiniteSinr, {});
  const Eigen::VectorXcd expected = slot.channel.g.col(0) + slot.channel.g.col(2) + slot.channel.g.col(4);
  CHECK((obs.filtered - expected).norm() < 1e-15);
  CHECK(obs.true_multiplicity == 3);
  CHECK(obs.energy.size() == 9);
  CHECK(obs.energy(0) == doctest::Approx(expected.head(2).squaredNorm() / 2));
  CHECK_THROWS_AS(observe_preamble(slot, 2, 1.0, {}), std::invalid_argument);
}

TEST_CASE("pure noise energy has mean 1 / (rho_T L)") {
  const SlotRealization slot = test_slot(2, 1, 20);  // UE sits on preamble 0
  const RadioParams radio;
  RngStream r(3, {"noise"});
  double sum = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) sum += matched_filter(slot, 5, radio, r).energy.mean();
  const double expected = 1.0 / (tx_snr_linear(radio) * 20);
  CHECK(sum / n == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("preamble energy") {
  Eigen::VectorXcd f(4);
  f << 1.0, 1.0, std::complex<double>(0, 2), 0.0;
  const Eigen::VectorXd e = preamble_energy(f, 2);
  CHECK(e(0) == doctest::Approx(1.0));
  CHECK(e(1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(preamble_energy(f, 3), std::invalid_argument);
}

TEST_CASE("SINR limits") {
  const SlotRealization solo = test_slot(4, 1, 1);
  const std::vector<int> all{0, 1, 2, 3, 4, 5, 6, 7, 8};
  const Eigen::VectorXcd genie = solo.channel.g.col(0);
  CHECK(std::isinf(sinr_for_ue(solo, 0, all, genie, 1.0, {})));
  Eigen::VectorXcd noise = Eigen::VectorXcd::Constant(genie.size(), 1.0);
  CHECK(sinr_for_ue(solo, 0, all, genie, 1e-30, noise) < 1e-10);
  CHECK(sinr_for_ue(solo, 0, all, Eigen::VectorXcd::Zero(genie.size()), 1.0, {}) == 0.0);
  CHECK_THROWS_AS(sinr_for_ue(solo, 0, {}, genie, 1.0, {}), std::invalid_argument);

  const SlotRealization pair = test_slot(5, 2, 1);
  const auto obs = observe_preamble(pair, 0, kInfiniteSinr, {});
  const SinrTerms t = sinr_terms(pair, 0, all, obs.filtered, 2.0, {});
  CHECK(t.other_interference == 0.0);
  CHECK(t.noise == 0.0);
  CHECK(t.signal == doctest::Approx(2.0 * std::norm(obs.filtered.dot(pair.channel.g.col(0)))));
  CHECK(t.value() == doctest::Approx(t.signal / t.collided_interference));
}

TEST_CASE("achievable rate") {
  CHECK(achievable_rate(1.0, 200e3) == doctest::Approx(200e3));
  CHECK(achievable_rate(0.0, 200e3) == 0.0);
  CHECK(achievable_rate(kInfiniteSinr, 1.0, 1e12) == doctest::Approx(std::log2(1.0 + 1e12)));
  CHECK_THROWS_AS(achievable_rate(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("asymptotic SINR from mean gains") {
  LinkGains g;
  g.beta.resize(3, 3);
  g.beta << 1, 1, 2,
            2, 2, 2,
            3, 3, 2;
  const std::vector<int> one{1}, two{1, 2};
  CHECK(asymptotic_sinr(g, 0, one) == doctest::Approx(1.0));
  CHECK(asymptotic_sinr(g, 0, two) == doctest::Approx(0.5));
  CHECK(std::isinf(asymptotic_sinr(g, 0, {})));
}

}
