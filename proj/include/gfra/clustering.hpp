#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "gfra/scene.hpp"

namespace gfra {

/// Indices of the `count` largest entries, largest first. Equal values keep
/// the lower index first.
std::vector<int> top_energy_aps(const Eigen::VectorXd& energy, int count);

struct ApShortlist {
  std::vector<int> indices;
  std::vector<Point> coords;

  int size() const { return static_cast<int>(indices.size()); }
};

ApShortlist shortlist_aps(const Eigen::VectorXd& energy, int count, const Deployment& deployment);

struct ClusterSet {
  std::vector<int> assignments;  // cluster of each shortlisted point
  std::vector<Point> centroids;
  double wcss = 0.0;
  int iterations = 0;
  std::vector<double> wcss_history;  // after each assignment step, best restart only

  int num_clusters() const { return static_cast<int>(centroids.size()); }
};

double within_cluster_ss(std::span<const Point> points, std::span<const int> assignments,
                         std::span<const Point> centroids);

/// One Lloyd run from k distinct random points.
ClusterSet lloyd_kmeans(std::span<const Point> points, int k, RngStream& rng,
                        int max_iterations = 100);

/// Best of `restarts` Lloyd runs by WCSS; restart r uses rng.child(r).
ClusterSet kmeans_cluster(std::span<const Point> points, int k, const RngStream& rng,
                          int restarts = 10);

/// Shortlist of m_c * b_hat strongest APs split into b_hat clusters.
struct CollisionResolution {
  ApShortlist shortlist;
  ClusterSet clusters;
  std::vector<std::vector<int>> ap_sets;  // AP indices per cluster
  bool clamped = false;                   // m_c * b_hat exceeded M

  bool empty() const { return ap_sets.empty(); }
};

/// b_hat = 0 gives an empty result (missed detection).
CollisionResolution resolve_collision(const Eigen::VectorXd& energy, int b_hat, int m_c,
                                      const Deployment& deployment, const RngStream& rng,
                                      int restarts = 10);

/// Cluster whose centroid is nearest to the UE; ties go to the lower index.
int assign_cluster_to_ue(std::span<const Point> centroids, const Point& ue);

/// Cluster with the largest summed per-AP gain of the target UE.
int match_cluster_by_gain(const std::vector<std::vector<int>>& ap_sets,
                          const Eigen::VectorXd& per_ap_gain);

/// APs with the m_c largest gains of the target UE.
std::vector<int> select_genie(const Eigen::VectorXd& per_ap_gain, int m_c);
std::vector<int> select_mc_strongest(const Eigen::VectorXd& energy, int m_c);

/// Rows `cluster_id,ap_index,x,y`.
void write_clusters_csv(std::ostream& out, const CollisionResolution& resolution);

}  // namespace gfra
