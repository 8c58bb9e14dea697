#include "gfra/experiments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gfra/airlink.hpp"
#include "gfra/clustering.hpp"
#include "gfra/model_io.hpp"
#include "gfra/parallel.hpp"

namespace gfra {

namespace {

std::string num(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

DatasetRequest dataset_request(const ExperimentConfig& config) {
  DatasetRequest req;
  req.samples = config.train.q_samples;
  req.t_max = config.t_max;
  req.law = config.label_law;
  req.fractions = config.train.fractions;
  req.threads = resolve_threads(config.threads);
  return req;
}

}  // namespace

Dataset make_dataset(const ExperimentConfig& config) {
  config.validate();
  return gen_dataset(dataset_request(config), config.deployment(), config.traffic, config.pathloss,
                     config.radio, derive_stream(config.seed, {"dataset"}));
}

void assign_config_splits(Dataset& data, const ExperimentConfig& config) {
  data.split = assign_splits(data.size(), config.train.fractions,
                             derive_stream(config.seed, {"dataset"}).child("split"));
}

TrainedModels train_models(const ExperimentConfig& config, const Dataset& data) {
  TrainResult tr = train_classifier(data, config.effective_hidden_layers(), config.train,
                                    derive_stream(config.seed, {"init"}));
  const auto rows = data.rows_in(Split::kTrain);
  TrainedModels out;
  out.ted = fit_ted(data.energies_of(rows), data.labels_of(rows), data.t_max, config.ted_scaling);
  out.dnn = std::move(tr.model);
  out.history = std::move(tr.history);
  out.best_epoch = tr.best_epoch;
  out.reason = tr.reason;
  out.stopped_on_validation = tr.stopped_on_validation;
  return out;
}

ConfusionResult evaluate_confusion(const MlpModel& dnn, const TedModel& ted, const Dataset& data) {
  const auto rows = data.rows_in(Split::kTest);
  const Eigen::MatrixXd energies = data.energies_of(rows);
  const std::vector<int> labels = data.labels_of(rows);
  ConfusionResult res;
  res.dnn_counts = confusion_counts([&](const Eigen::VectorXd& e) { return predict_energy(dnn, e); },
                                    energies, labels, data.t_max);
  res.ted_counts = confusion_counts([&](const Eigen::VectorXd& e) { return predict_ted(ted, e); },
                                    energies, labels, data.t_max);
  const auto normalize = [](const Eigen::MatrixXi& counts) {
    Eigen::MatrixXd r = counts.cast<double>();
    for (Eigen::Index b = 0; b < r.rows(); ++b) {
      const double total = r.row(b).sum();
      if (total > 0.0) r.row(b) /= total;
    }
    return r;
  };
  res.dnn = normalize(res.dnn_counts);
  res.ted = normalize(res.ted_counts);
  return res;
}

ConfusionRun run_confusion(const ExperimentConfig& config) {
  const Dataset data = make_dataset(config);
  ConfusionRun run;
  run.models = train_models(config, data);
  run.confusion = evaluate_confusion(run.models.dnn, run.models.ted, data);
  return run;
}

const SchemeRates* RateReport::find(const std::string& scheme, int m_c) const {
  for (const auto& s : schemes) {
    if (s.scheme == scheme && (scheme == kSchemeAllAp || s.m_c == m_c)) return &s;
  }
  return nullptr;
}

namespace {

struct TrialRates {
  std::vector<std::vector<double>> rates;  // per scheme entry
  std::vector<int> missed;
  std::vector<int> clamped;
};

bool has_scheme(const ExperimentConfig& config, const char* name) {
  for (const auto& s : config.schemes) {
    if (s == name) return true;
  }
  return false;
}

}  // namespace

RateReport run_rate_experiment(const ExperimentConfig& config, const MlpModel* dnn,
                               const TedModel* ted) {
  config.validate();
  const Deployment dep = config.deployment();
  const int m_total = dep.num_aps();
  const int s = dep.antennas_per_ap;
  if (has_scheme(config, kSchemeDnnCluster)) {
    if (dnn == nullptr) throw std::invalid_argument("dnn_cluster scheme needs a trained model");
    check_model_matches(*dnn, m_total, s);
  }
  if (has_scheme(config, kSchemeTedCluster)) {
    if (ted == nullptr) throw std::invalid_argument("ted_cluster scheme needs a fitted T-ED model");
  }

  RateReport report;
  report.trials = config.trials;
  for (const auto& name : config.schemes) {
    SchemeRates entry;
    entry.scheme = name;
    if (name == kSchemeAllAp) {
      report.schemes.push_back(entry);
      continue;
    }
    for (int m_c : config.mc_list) {
      entry.m_c = m_c;
      report.schemes.push_back(entry);
    }
  }
  const int n_entries = static_cast<int>(report.schemes.size());
  const double rho_t = tx_snr_linear(config.radio);
  const double bw = config.radio.bandwidth_hz;

  std::vector<TrialRates> per_trial(config.trials);
  parallel_for(config.trials, resolve_threads(config.threads), [&](int t) {
    const RngStream trial = derive_stream(config.seed, {"rates", t});
    RngStream slot_rng = trial.child("slot");
    const SlotRealization slot = simulate_slot(dep, config.traffic, config.pathloss, slot_rng);
    RngStream data_rng = trial.child("data_noise");
    Eigen::VectorXcd data_noise(slot.channel.g.rows());
    for (Eigen::Index i = 0; i < data_noise.size(); ++i) data_noise(i) = data_rng.complex_normal();

    TrialRates out;
    out.rates.resize(n_entries);
    out.missed.assign(n_entries, 0);
    out.clamped.assign(n_entries, 0);
    std::vector<int> all_aps(m_total);
    for (int m = 0; m < m_total; ++m) all_aps[m] = m;

    for (int l = 0; l < slot.pool_size; ++l) {
      const std::vector<int> users = slot.users_of(l);
      if (users.size() < 2) continue;
      RngStream noise_rng = trial.child({"preamble_noise", l});
      const PreambleObservation obs = matched_filter(slot, l, config.radio, noise_rng);
      const int b_dnn = dnn ? predict_energy(*dnn, obs.energy) : 0;
      const int b_ted = ted ? predict_ted(*ted, obs.energy) : 0;

      for (int e = 0; e < n_entries; ++e) {
        const SchemeRates& entry = report.schemes[e];
        const std::string& name = entry.scheme;
        const int m_c = std::min(entry.m_c, m_total);
        auto rate_on = [&](int u, std::span<const int> aps) {
          const double sinr = sinr_for_ue(slot, u, aps, obs.filtered, rho_t, data_noise);
          out.rates[e].push_back(achievable_rate(sinr, bw, config.sinr_cap));
        };
        auto genie_gain = [&](int u) -> Eigen::VectorXd {
          if (config.genie_gain == GenieGain::kLargeScale) return slot.gains.beta.col(u);
          return preamble_energy(slot.channel.g.col(u), s);
        };

        if (name == kSchemeAllAp) {
          for (int u : users) rate_on(u, all_aps);
        } else if (name == kSchemeMcStrongest) {
          const auto aps = select_mc_strongest(obs.energy, m_c);
          for (int u : users) rate_on(u, aps);
        } else if (name == kSchemeGenie) {
          for (int u : users) rate_on(u, select_genie(genie_gain(u), m_c));
        } else {
          const int b_hat = name == kSchemeDnnCluster ? b_dnn : b_ted;
          // Same clustering stream for both estimators, so equal estimates
          // give equal clusters.
          const CollisionResolution res =
              resolve_collision(obs.energy, b_hat, entry.m_c, dep,
                                trial.child({"kmeans", l, entry.m_c}), config.kmeans_restarts);
          if (res.clamped) ++out.clamped[e];
          for (int u : users) {
            if (res.empty()) {
              out.rates[e].push_back(0.0);
              ++out.missed[e];
              continue;
            }
            const int c = config.cluster_match == ClusterMatch::kCentroid
                              ? assign_cluster_to_ue(res.clusters.centroids, slot.ue_positions[u])
                              : match_cluster_by_gain(res.ap_sets, genie_gain(u));
            rate_on(u, res.ap_sets[c]);
          }
        }
      }
    }
    per_trial[t] = std::move(out);
  });

  for (int e = 0; e < n_entries; ++e) {
    SchemeRates& entry = report.schemes[e];
    for (const auto& tr : per_trial) {
      entry.rates.insert(entry.rates.end(), tr.rates[e].begin(), tr.rates[e].end());
      entry.missed += tr.missed[e];
      entry.clamped += tr.clamped[e];
    }
    entry.ccdf = empirical_ccdf(entry.rates, config.rate_grid);
    entry.likely95 = entry.rates.empty() ? 0.0 : likely95_rate(entry.rates);
    entry.ergodic = entry.rates.empty() ? 0.0 : ergodic_rate(entry.rates);
  }
  if (n_entries > 0) report.collided_samples = static_cast<int>(report.schemes[0].rates.size());
  return report;
}

AsymptoticReport run_asymptotic_check(const ExperimentConfig& config) {
  config.validate();
  AsymptoticReport report;
  if (config.asym_colliders.empty()) {
    report.note = "skipped: no colliders configured";
    return report;
  }
  std::vector<Point> positions{config.asym_target};
  positions.insert(positions.end(), config.asym_colliders.begin(), config.asym_colliders.end());
  std::vector<int> colliders;
  for (int c = 1; c < static_cast<int>(positions.size()); ++c) colliders.push_back(c);

  for (int side : config.asym_grid_sides) {
    const Deployment dep = make_grid_deployment(side, side, config.area, config.antennas_per_ap);
    const RngStream base = derive_stream(config.seed, {"asymptotic", side});
    SlotRealization slot;
    slot.ue_positions = positions;
    slot.preamble_choice.assign(positions.size(), 0);
    slot.pool_size = 1;
    slot.antennas_per_ap = dep.antennas_per_ap;
    RngStream gain_rng = base.child("gains");
    slot.gains = draw_link_gains(dep, positions, config.pathloss, gain_rng);

    const int draws = config.asym_draws;
    std::vector<double> signal(draws), interference(draws);
    parallel_for(draws, resolve_threads(config.threads), [&](int d) {
      SlotRealization local;
      local.ue_positions = slot.ue_positions;
      local.preamble_choice = slot.preamble_choice;
      local.pool_size = 1;
      local.antennas_per_ap = slot.antennas_per_ap;
      local.gains = slot.gains;
      RngStream fading = base.child({"fading", d});
      local.channel = draw_channel(dep, local.gains, fading);
      const PreambleObservation obs = observe_preamble(local, 0, kInfiniteSinr, {});
      std::vector<int> aps(dep.num_aps());
      for (int m = 0; m < dep.num_aps(); ++m) aps[m] = m;
      const SinrTerms terms = sinr_terms(local, 0, aps, obs.filtered, 1.0, {});
      signal[d] = terms.signal;
      interference[d] = terms.collided_interference;
    });
    double sig = 0.0, intf = 0.0;
    for (int d = 0; d < draws; ++d) {
      sig += signal[d];
      intf += interference[d];
    }
    AsymptoticRow row;
    row.grid_side = side;
    row.num_aps = dep.num_aps();
    row.empirical = sig / intf;
    row.asymptotic = asymptotic_sinr(slot.gains, 0, colliders);
    row.rel_error = std::abs(row.empirical - row.asymptotic) / row.asymptotic;
    report.rows.push_back(row);
  }
  return report;
}

void write_confusion_csv(const std::filesystem::path& path, const Eigen::MatrixXd& rates) {
  auto out = open_out(path);
  out << "true_b";
  for (Eigen::Index c = 0; c < rates.cols(); ++c) out << ",pred_" << c;
  out << '\n';
  for (Eigen::Index b = 0; b < rates.rows(); ++b) {
    out << b;
    for (Eigen::Index c = 0; c < rates.cols(); ++c) out << ',' << num(rates(b, c));
    out << '\n';
  }
}

void write_history_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& history) {
  auto out = open_out(path);
  out << "epoch,train_loss,val_loss\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << num(r.train_loss) << ',' << num(r.val_loss) << '\n';
  }
}

void write_rate_outputs(const std::filesystem::path& dir, const RateReport& report) {
  {
    auto out = open_out(dir / "rate_summary.csv");
    out << "scheme,m_c,samples,missed,clamped,likely95_bps,likely95_db,ergodic_bps\n";
    for (const auto& s : report.schemes) {
      out << s.scheme << ',' << s.m_c << ',' << s.rates.size() << ',' << s.missed << ','
          << s.clamped << ',' << num(s.likely95) << ','
          << (s.likely95 > 0.0 ? num(rate_to_db(s.likely95)) : std::string("-inf")) << ','
          << num(s.ergodic) << '\n';
    }
  }
  auto out = open_out(dir / "rate_ccdf.csv");
  out << "scheme,m_c,rate_db,exceedance\n";
  for (const auto& s : report.schemes) {
    for (std::size_t i = 0; i < s.ccdf.rate_db.size(); ++i) {
      out << s.scheme << ',' << s.m_c << ',' << num(s.ccdf.rate_db[i]) << ','
          << num(s.ccdf.exceedance[i]) << '\n';
    }
  }
}

void write_asymptotic_csv(const std::filesystem::path& path, const AsymptoticReport& report) {
  auto out = open_out(path);
  if (!report.note.empty()) out << "# " << report.note << '\n';
  out << "grid_side,M,empirical_sinr,asymptotic_sinr,rel_error\n";
  for (const auto& r : report.rows) {
    out << r.grid_side << ',' << r.num_aps << ',' << num(r.empirical) << ',' << num(r.asymptotic)
        << ',' << num(r.rel_error) << '\n';
  }
}

void save_trained_models(const std::filesystem::path& dir, const TrainedModels& models) {
  save_model(dir / "model.bin", models.dnn);
  save_ted(dir / "ted.txt", models.ted);
  write_history_csv(dir / "history.csv", models.history);
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const ExperimentConfig& config) {
  {
    auto out = open_out(dir / "manifest.txt");
    out << "command = " << command << '\n';
    out << "seed = " << config.seed << '\n';
    out << "config_hash = " << config_hash(config) << '\n';
    out << "gfra_version = " << kVersion << '\n';
    out << "eigen_version = " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
        << EIGEN_MINOR_VERSION << '\n';
  }
  auto out = open_out(dir / "config.txt");
  out << config_to_text(config);
}

}  // namespace gfra
