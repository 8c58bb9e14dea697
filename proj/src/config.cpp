#include "gfra/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace gfra {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& s : split(v, ',')) out.push_back(to_int(key, s));
  return out;
}

Point to_point(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 2) throw std::invalid_argument(key + ": expected 'x,y', got '" + v + "'");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string fmt(const Point& p) { return fmt(p.x) + "," + fmt(p.y); }

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define GFRA_INT(name, member)                                                          \
  Field{name, [](ExperimentConfig& c, const std::string& v) { c.member = to_int(name, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }}
#define GFRA_DOUBLE(name, member)                                                           \
  Field{name, [](ExperimentConfig& c, const std::string& v) { c.member = to_double(name, v); }, \
        [](const ExperimentConfig& c) { return fmt(c.member); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      GFRA_INT("grid_rows", grid_rows),
      GFRA_INT("grid_cols", grid_cols),
      GFRA_INT("antennas_per_ap", antennas_per_ap),
      GFRA_DOUBLE("area_side_m", area.side_length),
      GFRA_INT("n_ues", traffic.n_ues_total),
      GFRA_DOUBLE("activation_prob", traffic.activation_prob),
      GFRA_INT("pool_size", traffic.pool_size),
      GFRA_DOUBLE("tx_power_dbm", radio.tx_power_dbm),
      GFRA_DOUBLE("noise_psd_dbm_hz", radio.noise_psd_dbm_hz),
      GFRA_DOUBLE("bandwidth_hz", radio.bandwidth_hz),
      GFRA_DOUBLE("noise_figure_db", radio.noise_figure_db),
      GFRA_DOUBLE("ref_distance_m", pathloss.ref_distance_m),
      GFRA_DOUBLE("ref_loss_db", pathloss.ref_loss_db),
      GFRA_DOUBLE("pathloss_exponent", pathloss.exponent),
      GFRA_DOUBLE("shadow_sigma_db", pathloss.shadow_sigma_db),
      GFRA_INT("t_max", t_max),
      Field{"hidden_layers",
            [](ExperimentConfig& c, const std::string& v) {
              c.hidden_layers = to_int_list("hidden_layers", v);
            },
            [](const ExperimentConfig& c) { return fmt(c.hidden_layers); }},
      Field{"normalizer",
            [](ExperimentConfig& c, const std::string& v) {
              try {
                c.train.normalizer = normalizer_from_string(v);
              } catch (const std::invalid_argument&) {
                throw std::invalid_argument("normalizer: unknown kind '" + v + "'");
              }
            },
            [](const ExperimentConfig& c) { return std::string(to_string(c.train.normalizer)); }},
      Field{"label_law",
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "binomial") {
                c.label_law = LabelLaw::kBinomial;
              } else if (v == "balanced") {
                c.label_law = LabelLaw::kBalanced;
              } else {
                throw std::invalid_argument("label_law: expected binomial or balanced");
              }
            },
            [](const ExperimentConfig& c) {
              return std::string(c.label_law == LabelLaw::kBinomial ? "binomial" : "balanced");
            }},
      Field{"ted_scaling",
            [](ExperimentConfig& c, const std::string& v) {
              try {
                c.ted_scaling = ted_scaling_from_string(v);
              } catch (const std::invalid_argument&) {
                throw std::invalid_argument("ted_scaling: expected per_position or global");
              }
            },
            [](const ExperimentConfig& c) { return std::string(to_string(c.ted_scaling)); }},
      GFRA_INT("q_samples", train.q_samples),
      GFRA_INT("max_epochs", train.max_epochs),
      GFRA_DOUBLE("min_gradient", train.min_gradient),
      GFRA_INT("max_val_checks", train.max_val_checks),
      GFRA_DOUBLE("scg_sigma", train.scg_sigma),
      GFRA_DOUBLE("scg_lambda", train.scg_lambda_init),
      GFRA_DOUBLE("split_train", train.fractions.train),
      GFRA_DOUBLE("split_validation", train.fractions.validation),
      GFRA_DOUBLE("split_test", train.fractions.test),
      Field{"mc_list",
            [](ExperimentConfig& c, const std::string& v) { c.mc_list = to_int_list("mc_list", v); },
            [](const ExperimentConfig& c) { return fmt(c.mc_list); }},
      Field{"schemes",
            [](ExperimentConfig& c, const std::string& v) { c.schemes = split(v, ','); },
            [](const ExperimentConfig& c) {
              std::string s;
              for (std::size_t i = 0; i < c.schemes.size(); ++i) s += (i ? "," : "") + c.schemes[i];
              return s;
            }},
      GFRA_INT("trials", trials),
      GFRA_INT("kmeans_restarts", kmeans_restarts),
      GFRA_DOUBLE("sinr_cap", sinr_cap),
      Field{"genie_gain",
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "large_scale") {
                c.genie_gain = GenieGain::kLargeScale;
              } else if (v == "instantaneous") {
                c.genie_gain = GenieGain::kInstantaneous;
              } else {
                throw std::invalid_argument("genie_gain: expected large_scale or instantaneous");
              }
            },
            [](const ExperimentConfig& c) {
              return std::string(c.genie_gain == GenieGain::kLargeScale ? "large_scale"
                                                                         : "instantaneous");
            }},
      Field{"cluster_match",
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "centroid") {
                c.cluster_match = ClusterMatch::kCentroid;
              } else if (v == "gain") {
                c.cluster_match = ClusterMatch::kGain;
              } else {
                throw std::invalid_argument("cluster_match: expected centroid or gain");
              }
            },
            [](const ExperimentConfig& c) {
              return std::string(c.cluster_match == ClusterMatch::kCentroid ? "centroid" : "gain");
            }},
      GFRA_DOUBLE("rate_grid_lo_db", rate_grid.lo_db),
      GFRA_DOUBLE("rate_grid_hi_db", rate_grid.hi_db),
      GFRA_DOUBLE("rate_grid_step_db", rate_grid.step_db),
      Field{"asym_grid_sides",
            [](ExperimentConfig& c, const std::string& v) {
              c.asym_grid_sides = to_int_list("asym_grid_sides", v);
            },
            [](const ExperimentConfig& c) { return fmt(c.asym_grid_sides); }},
      GFRA_INT("asym_draws", asym_draws),
      Field{"asym_target",
            [](ExperimentConfig& c, const std::string& v) {
              c.asym_target = to_point("asym_target", v);
            },
            [](const ExperimentConfig& c) { return fmt(c.asym_target); }},
      Field{"asym_colliders",
            [](ExperimentConfig& c, const std::string& v) {
              c.asym_colliders.clear();
              for (const auto& p : split(v, ';')) c.asym_colliders.push_back(to_point("asym_colliders", p));
            },
            [](const ExperimentConfig& c) {
              std::string s;
              for (std::size_t i = 0; i < c.asym_colliders.size(); ++i) {
                s += (i ? ";" : "") + fmt(c.asym_colliders[i]);
              }
              return s;
            }},
      Field{"seed",
            [](ExperimentConfig& c, const std::string& v) { c.seed = to_u64("seed", v); },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      GFRA_INT("threads", threads),
  };
  return table;
}

#undef GFRA_INT
#undef GFRA_DOUBLE

}  // namespace

void ExperimentConfig::validate() const {
  if (grid_rows < 1 || grid_cols < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  if (antennas_per_ap < 1) throw std::invalid_argument("antennas_per_ap must be >= 1");
  area.validate();
  traffic.validate();
  radio.validate();
  pathloss.validate();
  train.validate();
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  for (int h : hidden_layers) {
    if (h < 1) throw std::invalid_argument("hidden layer sizes must be >= 1");
  }
  if (train.q_samples < 10) throw std::invalid_argument("q_samples must be >= 10");
  for (int m : mc_list) {
    if (m < 1) throw std::invalid_argument("mc_list entries must be >= 1");
  }
  for (const auto& s : schemes) {
    if (s != kSchemeAllAp && s != kSchemeMcStrongest && s != kSchemeTedCluster &&
        s != kSchemeDnnCluster && s != kSchemeGenie) {
      throw std::invalid_argument("unknown scheme '" + s + "'");
    }
  }
  if (trials < 0) throw std::invalid_argument("trials must be >= 0");
  if (kmeans_restarts < 1) throw std::invalid_argument("kmeans_restarts must be >= 1");
  if (!(sinr_cap > 0.0)) throw std::invalid_argument("sinr_cap must be positive");
  rate_grid.points();
  for (int s : asym_grid_sides) {
    if (s < 1) throw std::invalid_argument("asym_grid_sides entries must be >= 1");
  }
  if (asym_draws < 1) throw std::invalid_argument("asym_draws must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

Deployment ExperimentConfig::deployment() const {
  return make_grid_deployment(grid_rows, grid_cols, area, antennas_per_ap);
}

std::vector<int> ExperimentConfig::effective_hidden_layers() const {
  if (!hidden_layers.empty()) return hidden_layers;
  if (grid_rows * grid_cols >= 100) return {128, 128, 64, 32};
  return {64, 128, 64, 32};
}

void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(config, value);
      return;
    }
  }
  throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  return parse_config(in);
}

std::string config_to_text(const ExperimentConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + " = " + f.get(config) + "\n";
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  // Worker count never changes results, so it stays out of the hash.
  ExperimentConfig c = config;
  c.threads = 0;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gfra
