#include "gfra/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gfra/parallel.hpp"

namespace gfra {

void SplitFractions::validate() const {
  if (train <= 0.0 || validation <= 0.0 || test <= 0.0) {
    throw std::invalid_argument("split fractions must be positive");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
}

std::vector<int> Dataset::rows_in(Split which) const {
  std::vector<int> rows;
  for (int q = 0; q < static_cast<int>(split.size()); ++q) {
    if (split[q] == which) rows.push_back(q);
  }
  return rows;
}

Eigen::MatrixXd Dataset::energies_of(const std::vector<int>& rows) const {
  Eigen::MatrixXd out(energies.rows(), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out.col(i) = energies.col(rows[i]);
  return out;
}

std::vector<int> Dataset::labels_of(const std::vector<int>& rows) const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(labels[r]);
  return out;
}

std::vector<Split> assign_splits(int samples, const SplitFractions& fractions, RngStream rng) {
  fractions.validate();
  std::vector<int> order(samples);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with our own stream so the permutation is portable.
  for (int i = samples - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
  const int n_train = static_cast<int>(std::lround(fractions.train * samples));
  const int n_val = static_cast<int>(std::lround(fractions.validation * samples));
  std::vector<Split> split(samples, Split::kTest);
  for (int i = 0; i < samples; ++i) {
    if (i < n_train) {
      split[order[i]] = Split::kTrain;
    } else if (i < n_train + n_val) {
      split[order[i]] = Split::kValidation;
    }
  }
  return split;
}

Dataset gen_dataset(const DatasetRequest& request, const Deployment& deployment,
                    const TrafficSpec& traffic, const PathLossParams& pathloss,
                    const RadioParams& radio, const RngStream& rng) {
  if (request.samples <= 0) throw std::invalid_argument("dataset size must be positive");
  if (request.t_max < 0) throw std::invalid_argument("t_max must be >= 0");
  traffic.validate();
  const double per_preamble = traffic.activation_prob / traffic.pool_size;
  if (request.law == LabelLaw::kBinomial && per_preamble >= 1.0) {
    throw std::invalid_argument("activation probability too large for the label law");
  }

  Dataset data;
  data.t_max = request.t_max;
  data.antennas_per_ap = deployment.antennas_per_ap;
  data.energies.resize(deployment.num_aps(), request.samples);
  data.labels.assign(request.samples, 0);

  parallel_for(request.samples, request.threads, [&](int q) {
    RngStream r = rng.child({"sample", q});
    int b = 0;
    if (request.law == LabelLaw::kBalanced) {
      b = r.uniform_int(0, request.t_max);
    } else {
      do {
        b = r.binomial(traffic.n_ues_total, per_preamble);
      } while (b > request.t_max);
    }
    auto positions = place_ues_uniform(b, deployment.area, r);
    SlotRealization slot = make_slot(deployment, std::move(positions), std::vector<int>(b, 0),
                                     traffic.pool_size, pathloss, r);
    RngStream noise_rng = r.child("noise");
    const PreambleObservation obs = matched_filter(slot, 0, radio, noise_rng);
    data.energies.col(q) = obs.energy;
    data.labels[q] = obs.true_multiplicity;
  });

  data.split = assign_splits(request.samples, request.fractions, rng.child("split"));
  return data;
}

void write_dataset_csv(std::ostream& out, const Dataset& data,
                       const std::map<std::string, std::string>& meta) {
  out << "# M=" << data.num_aps() << " S=" << data.antennas_per_ap << " t_max=" << data.t_max
      << " Q=" << data.size();
  for (const auto& [k, v] : meta) {
    if (k == "M" || k == "S" || k == "t_max" || k == "Q") continue;
    out << ' ' << k << '=' << v;
  }
  out << '\n';
  char buf[32];
  for (int q = 0; q < data.size(); ++q) {
    out << data.labels[q];
    for (Eigen::Index m = 0; m < data.energies.rows(); ++m) {
      std::snprintf(buf, sizeof buf, ",%.17g", data.energies(m, q));
      out << buf;
    }
    out << '\n';
  }
}

LoadedDataset read_dataset_csv(std::istream& in) {
  LoadedDataset res;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw std::invalid_argument("dataset: missing '# key=value' header line");
  }
  std::istringstream header(line.substr(2));
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("dataset: bad header token " + token);
    res.meta[token.substr(0, eq)] = token.substr(eq + 1);
  }
  if (!res.meta.count("M") || !res.meta.count("S")) {
    throw std::invalid_argument("dataset: header must name M and S");
  }
  const int m_count = std::stoi(res.meta["M"]);
  res.data.antennas_per_ap = std::stoi(res.meta["S"]);
  res.data.t_max = res.meta.count("t_max") ? std::stoi(res.meta["t_max"]) : 4;

  std::vector<double> values;
  std::vector<int> labels;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string f;
    std::getline(fields, f, ',');
    const int label = std::stoi(f);
    if (label < 0 || label > res.data.t_max) {
      throw std::invalid_argument("dataset: label out of range at row " + std::to_string(row));
    }
    labels.push_back(label);
    int count = 0;
    while (std::getline(fields, f, ',')) {
      values.push_back(std::stod(f));
      ++count;
    }
    if (count != m_count) {
      throw std::invalid_argument("dataset: row " + std::to_string(row) + " has " +
                                  std::to_string(count) + " energies, expected " +
                                  std::to_string(m_count));
    }
    ++row;
  }
  res.data.labels = std::move(labels);
  res.data.energies = Eigen::Map<Eigen::MatrixXd>(values.data(), m_count, row);
  return res;
}

}  // namespace gfra
