#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gfra/channel.hpp"
#include "gfra/dataset.hpp"
#include "gfra/rate_stats.hpp"
#include "gfra/scene.hpp"
#include "gfra/ted.hpp"
#include "gfra/training.hpp"

namespace gfra {

enum class GenieGain { kLargeScale, kInstantaneous };
enum class ClusterMatch { kCentroid, kGain };

inline constexpr const char* kSchemeAllAp = "all_ap";
inline constexpr const char* kSchemeMcStrongest = "mc_strongest";
inline constexpr const char* kSchemeTedCluster = "ted_cluster";
inline constexpr const char* kSchemeDnnCluster = "dnn_cluster";
inline constexpr const char* kSchemeGenie = "genie";

/// Everything a run needs. Defaults give the reference setup
/// (10 x 10 APs, S = 2, sigma_SF = 8 dB).
struct ExperimentConfig {
  int grid_rows = 10;
  int grid_cols = 10;
  int antennas_per_ap = 2;
  AreaSpec area;
  TrafficSpec traffic;
  RadioParams radio;
  PathLossParams pathloss;

  int t_max = 4;
  std::vector<int> hidden_layers;  // empty: chosen from M
  LabelLaw label_law = LabelLaw::kBinomial;
  TrainConfig train;
  TedScaling ted_scaling = TedScaling::kPerPosition;

  std::vector<int> mc_list{1, 2, 4, 8, 16};
  std::vector<std::string> schemes{kSchemeAllAp, kSchemeMcStrongest, kSchemeTedCluster,
                                    kSchemeDnnCluster, kSchemeGenie};
  int trials = 10000;
  int kmeans_restarts = 10;
  double sinr_cap = 1e12;
  GenieGain genie_gain = GenieGain::kLargeScale;
  ClusterMatch cluster_match = ClusterMatch::kCentroid;
  RateGrid rate_grid;

  std::vector<int> asym_grid_sides{5, 10, 20, 30};
  int asym_draws = 1000;
  Point asym_target{300.0, 500.0};
  std::vector<Point> asym_colliders{{700.0, 500.0}};

  std::uint64_t seed = 1;
  int threads = 0;  // 0: all hardware threads

  void validate() const;
  Deployment deployment() const;
  /// (128,128,64,32) for M >= 100, (64,128,64,32) below.
  std::vector<int> effective_hidden_layers() const;
};

/// `key = value` lines; `#` starts a comment; unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key = value` assignment.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Canonical dump of every key, parseable by parse_config.
std::string config_to_text(const ExperimentConfig& config);

/// FNV-1a 64 of config_to_text with `threads` zeroed, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace gfra
