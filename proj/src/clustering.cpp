#include "gfra/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gfra {

std::vector<int> top_energy_aps(const Eigen::VectorXd& energy, int count) {
  const int m = static_cast<int>(energy.size());
  if (count < 1 || count > m) {
    throw std::invalid_argument("count must be in [1, " + std::to_string(m) + "], got " +
                                std::to_string(count));
  }
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return energy(a) > energy(b); });
  idx.resize(count);
  return idx;
}

ApShortlist shortlist_aps(const Eigen::VectorXd& energy, int count, const Deployment& deployment) {
  if (energy.size() != deployment.num_aps()) {
    throw std::invalid_argument("energy vector length does not match the deployment");
  }
  ApShortlist s;
  s.indices = top_energy_aps(energy, count);
  for (int m : s.indices) s.coords.push_back(deployment.ap_coords[m]);
  return s;
}

double within_cluster_ss(std::span<const Point> points, std::span<const int> assignments,
                         std::span<const Point> centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += squared_distance(points[i], centroids[assignments[i]]);
  }
  return total;
}

namespace {

int nearest(std::span<const Point> centroids, const Point& p) {
  int best = 0;
  double best_d = squared_distance(p, centroids[0]);
  for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<Point> means_of(std::span<const Point> points, std::span<const int> assignments,
                            int k) {
  std::vector<Point> sums(k);
  std::vector<int> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    sums[assignments[i]].x += points[i].x;
    sums[assignments[i]].y += points[i].y;
    ++counts[assignments[i]];
  }
  for (int c = 0; c < k; ++c) {
    sums[c].x /= counts[c];
    sums[c].y /= counts[c];
  }
  return sums;
}

}  // namespace

ClusterSet lloyd_kmeans(std::span<const Point> points, int k, RngStream& rng,
                        int max_iterations) {
  const int n = static_cast<int>(points.size());
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (n < k) {
    throw std::invalid_argument("cannot form " + std::to_string(k) + " clusters from " +
                                std::to_string(n) + " points");
  }
  // k distinct starting points by partial Fisher-Yates.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < k; ++i) std::swap(order[i], order[rng.uniform_int(i, n - 1)]);

  ClusterSet cs;
  cs.centroids.resize(k);
  for (int c = 0; c < k; ++c) cs.centroids[c] = points[order[c]];
  cs.assignments.assign(n, -1);

  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const int c = nearest(cs.centroids, points[i]);
      if (c != cs.assignments[i]) {
        cs.assignments[i] = c;
        changed = true;
      }
    }
    // Empty cluster: move the worst-fitted point into it.
    for (int c = 0; c < k; ++c) {
      if (std::find(cs.assignments.begin(), cs.assignments.end(), c) != cs.assignments.end()) {
        continue;
      }
      int far = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        const int own = cs.assignments[i];
        if (std::count(cs.assignments.begin(), cs.assignments.end(), own) < 2) continue;
        const double d = squared_distance(points[i], cs.centroids[own]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      cs.assignments[far] = c;
      cs.centroids[c] = points[far];
      changed = true;
    }
    cs.wcss_history.push_back(within_cluster_ss(points, cs.assignments, cs.centroids));
    cs.iterations = iter + 1;
    if (!changed) break;
    cs.centroids = means_of(points, cs.assignments, k);
  }
  cs.wcss = within_cluster_ss(points, cs.assignments, cs.centroids);
  return cs;
}

ClusterSet kmeans_cluster(std::span<const Point> points, int k, const RngStream& rng,
                          int restarts) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  ClusterSet best;
  for (int r = 0; r < restarts; ++r) {
    RngStream run = rng.child(r);
    ClusterSet cs = lloyd_kmeans(points, k, run);
    if (r == 0 || cs.wcss < best.wcss) best = std::move(cs);
  }
  return best;
}

CollisionResolution resolve_collision(const Eigen::VectorXd& energy, int b_hat, int m_c,
                                      const Deployment& deployment, const RngStream& rng,
                                      int restarts) {
  if (b_hat < 0) throw std::invalid_argument("b_hat must be >= 0");
  if (m_c < 1) throw std::invalid_argument("m_c must be >= 1");
  CollisionResolution res;
  if (b_hat == 0) return res;
  const int m = deployment.num_aps();
  int count = m_c * b_hat;
  if (count > m) {
    count = m;
    res.clamped = true;
  }
  const int k = std::min(b_hat, count);
  res.shortlist = shortlist_aps(energy, count, deployment);
  res.clusters = kmeans_cluster(res.shortlist.coords, k, rng, restarts);
  res.ap_sets.resize(k);
  for (int i = 0; i < res.shortlist.size(); ++i) {
    res.ap_sets[res.clusters.assignments[i]].push_back(res.shortlist.indices[i]);
  }
  return res;
}

int assign_cluster_to_ue(std::span<const Point> centroids, const Point& ue) {
  if (centroids.empty()) throw std::invalid_argument("no clusters to choose from");
  return nearest(centroids, ue);
}

int match_cluster_by_gain(const std::vector<std::vector<int>>& ap_sets,
                          const Eigen::VectorXd& per_ap_gain) {
  if (ap_sets.empty()) throw std::invalid_argument("no clusters to choose from");
  int best = 0;
  double best_gain = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < static_cast<int>(ap_sets.size()); ++c) {
    double g = 0.0;
    for (int m : ap_sets[c]) g += per_ap_gain(m);
    if (g > best_gain) {
      best_gain = g;
      best = c;
    }
  }
  return best;
}

std::vector<int> select_genie(const Eigen::VectorXd& per_ap_gain, int m_c) {
  return top_energy_aps(per_ap_gain, m_c);
}

std::vector<int> select_mc_strongest(const Eigen::VectorXd& energy, int m_c) {
  return top_energy_aps(energy, m_c);
}

void write_clusters_csv(std::ostream& out, const CollisionResolution& resolution) {
  out << "cluster_id,ap_index,x,y\n";
  const auto& s = resolution.shortlist;
  for (int c = 0; c < static_cast<int>(resolution.ap_sets.size()); ++c) {
    for (int i = 0; i < s.size(); ++i) {
      if (resolution.clusters.assignments[i] != c) continue;
      out << c << ',' << s.indices[i] << ',' << s.coords[i].x << ',' << s.coords[i].y << '\n';
    }
  }
}

}  // namespace gfra
