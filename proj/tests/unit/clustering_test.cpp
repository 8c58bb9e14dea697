#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "gfra/clustering.hpp"

using namespace gfra;

namespace {

// Exhaustive minimum WCSS for k = 2 over all bipartitions.
double brute_force_wcss2(const std::vector<Point>& pts) {
  const int n = static_cast<int>(pts.size());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
      double sx = 0, sy = 0;
      int c = 0;
      for (int i = 0; i < n; ++i) {
        if (((mask >> i) & 1) == side) {
          sx += pts[i].x;
          sy += pts[i].y;
          ++c;
        }
      }
      const Point mean{sx / c, sy / c};
      for (int i = 0; i < n; ++i) {
        if (((mask >> i) & 1) == side) total += squared_distance(pts[i], mean);
      }
    }
    best = std::min(best, total);
  }
  return best;
}

}  // namespace

TEST_SUITE("clustering") {

TEST_CASE("top energy APs") {
  const Eigen::Vector3d e(9, 0, 16);
  CHECK(top_energy_aps(e, 2) == std::vector<int>{2, 0});
  CHECK(top_energy_aps(e, 3) == std::vector<int>{2, 0, 1});
  const Eigen::Vector4d tie(1, 5, 5, 1);
  CHECK(top_energy_aps(tie, 3) == std::vector<int>{1, 2, 0});
  CHECK_THROWS_AS(top_energy_aps(e, 0), std::invalid_argument);
  CHECK_THROWS_AS(top_energy_aps(e, 4), std::invalid_argument);
}

TEST_CASE("single cluster sits at the mean") {
  const std::vector<Point> pts{{0, 0}, {2, 0}, {2, 4}, {0, 4}};
  RngStream r(1, {"k1"});
  const ClusterSet c = lloyd_kmeans(pts, 1, r);
  CHECK(c.centroids[0].x == doctest::Approx(1.0));
  CHECK(c.centroids[0].y == doctest::Approx(2.0));
  CHECK(c.wcss == doctest::Approx(4 * 5.0));
}

TEST_CASE("two separated groups match exhaustive search") {
  for (int trial = 0; trial < 20; ++trial) {
    RngStream r(2, {"quads", trial});
    std::vector<Point> pts;
    for (int i = 0; i < 4; ++i) pts.push_back({r.uniform(0, 100), r.uniform(0, 100)});
    for (int i = 0; i < 4; ++i) pts.push_back({r.uniform(600, 700), r.uniform(0, 100)});
    const ClusterSet c = kmeans_cluster(pts, 2, r.child("km"));
    CHECK(c.wcss == doctest::Approx(brute_force_wcss2(pts)));
    CHECK(c.wcss == doctest::Approx(within_cluster_ss(pts, c.assignments, c.centroids)));
    CHECK(c.assignments[0] != c.assignments[7]);
  }
}

TEST_CASE("k equal to n gives zero WCSS and every cluster is used") {
  const std::vector<Point> pts{{0, 0}, {10, 0}, {0, 10}, {10, 10}, {5, 5}};
  const ClusterSet c = kmeans_cluster(pts, 5, RngStream(3, {"kn"}));
  CHECK(c.wcss == doctest::Approx(0.0));
  std::set<int> used(c.assignments.begin(), c.assignments.end());
  CHECK(used.size() == 5);
  CHECK_THROWS_AS(kmeans_cluster(pts, 6, RngStream(3, {"kn"})), std::invalid_argument);
  CHECK_THROWS_AS(kmeans_cluster(pts, 0, RngStream(3, {"kn"})), std::invalid_argument);
}

TEST_CASE("WCSS never increases across Lloyd iterations") {
  RngStream r(4, {"hist"});
  std::vector<Point> pts;
  for (int i = 0; i < 60; ++i) pts.push_back({r.uniform(0, 1000), r.uniform(0, 1000)});
  for (int k : {2, 3, 5, 8}) {
    RngStream rk = r.child(k);
    const ClusterSet c = lloyd_kmeans(pts, k, rk);
    REQUIRE(!c.wcss_history.empty());
    for (std::size_t i = 1; i < c.wcss_history.size(); ++i) {
      CHECK(c.wcss_history[i] <= c.wcss_history[i - 1] + 1e-9);
    }
    std::set<int> used(c.assignments.begin(), c.assignments.end());
    CHECK(static_cast<int>(used.size()) == k);
  }
}

TEST_CASE("collision resolution") {
  const Deployment dep = make_grid_deployment(5, 5, AreaSpec{}, 1);
  Eigen::VectorXd energy(25);
  for (int m = 0; m < 25; ++m) energy(m) = 1.0 + m;
  const RngStream rng(5, {"resolve"});

  CHECK(resolve_collision(energy, 0, 4, dep, rng).empty());

  const auto one = resolve_collision(energy, 1, 4, dep, rng);
  REQUIRE(one.ap_sets.size() == 1);
  CHECK(one.ap_sets[0] == std::vector<int>{24, 23, 22, 21});

  const auto three = resolve_collision(energy, 3, 4, dep, rng);
  REQUIRE(three.ap_sets.size() == 3);
  std::vector<int> all;
  for (const auto& s : three.ap_sets) {
    CHECK(!s.empty());
    all.insert(all.end(), s.begin(), s.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<int> expected(12);
  for (int i = 0; i < 12; ++i) expected[i] = 13 + i;
  CHECK(all == expected);
  CHECK(!three.clamped);

  const auto big = resolve_collision(energy, 4, 8, dep, rng);
  CHECK(big.clamped);
  CHECK(big.shortlist.size() == 25);
  CHECK(big.ap_sets.size() == 4);

  // Same stream, same answer.
  const auto again = resolve_collision(energy, 3, 4, dep, rng);
  CHECK(again.ap_sets == three.ap_sets);

  std::ostringstream csv;
  write_clusters_csv(csv, three);
  CHECK(csv.str().rfind("cluster_id,ap_index,x,y\n", 0) == 0);
}

TEST_CASE("UE to cluster assignment") {
  const std::vector<Point> c{{0, 0}, {10, 0}, {5, 100}};
  CHECK(assign_cluster_to_ue(c, {1, 1}) == 0);
  CHECK(assign_cluster_to_ue(c, {5, 0}) == 0);  // tie
  CHECK(assign_cluster_to_ue(c, {9, 1}) == 1);
  CHECK(assign_cluster_to_ue(c, {5, 90}) == 2);

  const std::vector<std::vector<int>> sets{{0, 1}, {2}, {3, 4}};
  const Eigen::VectorXd g = (Eigen::VectorXd(5) << 1, 1, 5, 2, 2).finished();
  CHECK(match_cluster_by_gain(sets, g) == 1);
}

TEST_CASE("genie and strongest selections") {
  const Eigen::VectorXd g = (Eigen::VectorXd(5) << 0.1, 0.9, 0.3, 0.9, 0.5).finished();
  CHECK(select_genie(g, 1) == std::vector<int>{1});
  CHECK(select_genie(g, 3) == std::vector<int>{1, 3, 4});
  CHECK(select_mc_strongest(g, 2) == std::vector<int>{1, 3});
  CHECK(select_genie(g, 5).size() == 5);
}

}
