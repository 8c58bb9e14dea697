#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gfra/airlink.hpp"
#include "gfra/channel.hpp"
#include "gfra/scene.hpp"

namespace gfra {

enum class Split : std::uint8_t { kTrain, kValidation, kTest };

struct SplitFractions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;

  void validate() const;
};

/// Labelled per-AP energy observations for one designated preamble.
struct Dataset {
  Eigen::MatrixXd energies;  // M x Q, column q = raw (unsorted) energy vector
  std::vector<int> labels;   // true multiplicity, 0..t_max
  std::vector<Split> split;
  int t_max = 4;
  int antennas_per_ap = 1;

  int size() const { return static_cast<int>(labels.size()); }
  int num_aps() const { return static_cast<int>(energies.rows()); }
  std::vector<int> rows_in(Split which) const;
  Eigen::MatrixXd energies_of(const std::vector<int>& rows) const;
  std::vector<int> labels_of(const std::vector<int>& rows) const;
};

enum class LabelLaw {
  kBinomial,  // B ~ Binomial(N, rho / L), redrawn while B > t_max
  kBalanced,  // uniform on 0..t_max; ablation only
};

struct DatasetRequest {
  int samples = 100000;
  int t_max = 4;
  LabelLaw law = LabelLaw::kBinomial;
  SplitFractions fractions;
  int threads = 1;
};

/// Sample q uses stream rng.child({"sample", q}), so the result does not
/// depend on `threads`.
Dataset gen_dataset(const DatasetRequest& request, const Deployment& deployment,
                    const TrafficSpec& traffic, const PathLossParams& pathloss,
                    const RadioParams& radio, const RngStream& rng);

/// Shuffle-based assignment: the first round(train*Q) shuffled rows train,
/// the next round(validation*Q) validate, the rest test.
std::vector<Split> assign_splits(int samples, const SplitFractions& fractions, RngStream rng);

/// One header line `# key=value ...` (must name M and S), then one row
/// `B,E_1,...,E_M` per sample.
void write_dataset_csv(std::ostream& out, const Dataset& data,
                       const std::map<std::string, std::string>& meta);

struct LoadedDataset {
  Dataset data;  // split left empty
  std::map<std::string, std::string> meta;
};

LoadedDataset read_dataset_csv(std::istream& in);

}  // namespace gfra
