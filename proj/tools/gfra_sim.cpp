#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "gfra/config.hpp"
#include "gfra/experiments.hpp"
#include "gfra/model_io.hpp"

namespace fs = std::filesystem;
using namespace gfra;

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "key = value configuration file (defaults if omitted)");
  cmd->add_option("--seed", args.seed, "master seed (overrides the config)");
  cmd->add_option("--threads", args.threads, "worker threads, 0 = all cores");
  cmd->add_option("--out", args.out, "output directory");
}

ExperimentConfig resolve(const CommonArgs& args) {
  ExperimentConfig config = args.config.empty() ? ExperimentConfig{} : load_config(args.config);
  if (args.seed) config.seed = *args.seed;
  if (args.threads) config.threads = *args.threads;
  config.validate();
  fs::create_directories(args.out);
  return config;
}

void log(const std::string& msg) { std::cerr << msg << '\n'; }

TrainedModels load_models(const fs::path& dir) {
  TrainedModels m;
  m.dnn = load_model(dir / "model.bin");
  m.ted = load_ted(dir / "ted.txt");
  return m;
}

Dataset dataset_for(const ExperimentConfig& config, const std::string& data_path) {
  if (data_path.empty()) return make_dataset(config);
  std::ifstream in(data_path);
  if (!in) throw std::runtime_error("cannot open dataset " + data_path);
  Dataset data = read_dataset_csv(in).data;
  if (data.num_aps() != config.grid_rows * config.grid_cols) {
    throw std::invalid_argument("dataset M does not match the configured grid");
  }
  assign_config_splits(data, config);
  return data;
}

void print_diagonal(const char* name, const Eigen::MatrixXd& conf) {
  std::string line = std::string(name) + " diagonal:";
  char buf[32];
  for (Eigen::Index b = 0; b < conf.rows(); ++b) {
    std::snprintf(buf, sizeof buf, " %.3f", conf(b, b));
    line += buf;
  }
  log(line);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grant-free random access simulator for distributed massive MIMO"};
  app.require_subcommand(1);

  CommonArgs gen_args, train_args, conf_args, rate_args, asym_args;
  std::string train_data, conf_models, rate_models;

  auto* gen = app.add_subcommand("gen-data", "generate a labelled energy dataset");
  add_common(gen, gen_args);

  auto* train = app.add_subcommand("train", "train the MLP and fit T-ED");
  add_common(train, train_args);
  train->add_option("--data", train_data, "dataset CSV from gen-data (generated if omitted)");

  auto* conf = app.add_subcommand("confusion", "confusion matrices for the MLP and T-ED");
  add_common(conf, conf_args);
  conf->add_option("--models", conf_models, "directory with model.bin and ted.txt (trains if omitted)");

  auto* rates = app.add_subcommand("rates", "achievable-rate experiment over all schemes");
  add_common(rates, rate_args);
  rates->add_option("--models", rate_models, "directory with model.bin and ted.txt (trains if omitted)");

  auto* asym = app.add_subcommand("asymptotic", "large-M SINR convergence check");
  add_common(asym, asym_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto config = resolve(gen_args);
      const Dataset data = make_dataset(config);
      std::ofstream out(fs::path(gen_args.out) / "dataset.csv");
      if (!out) throw std::runtime_error("cannot write dataset.csv");
      write_dataset_csv(out, data,
                        {{"seed", std::to_string(config.seed)},
                         {"config_hash", config_hash(config)},
                         {"shadow_sigma_db", std::to_string(config.pathloss.shadow_sigma_db)}});
      write_manifest(gen_args.out, "gen-data", config);
      log("wrote " + std::to_string(data.size()) + " samples");
    } else if (train->parsed()) {
      const auto config = resolve(train_args);
      const Dataset data = dataset_for(config, train_data);
      const TrainedModels models = train_models(config, data);
      save_trained_models(train_args.out, models);
      write_manifest(train_args.out, "train", config);
      log("best epoch " + std::to_string(models.best_epoch) + " of " +
          std::to_string(models.history.back().epoch) + ", stop: " +
          (models.stopped_on_validation ? std::string("validation") : std::string(to_string(models.reason))));
    } else if (conf->parsed()) {
      const auto config = resolve(conf_args);
      const Dataset data = make_dataset(config);
      TrainedModels models;
      if (conf_models.empty()) {
        models = train_models(config, data);
        save_trained_models(conf_args.out, models);
      } else {
        models = load_models(conf_models);
        check_model_matches(models.dnn, data.num_aps(), data.antennas_per_ap);
      }
      const ConfusionResult res = evaluate_confusion(models.dnn, models.ted, data);
      write_confusion_csv(fs::path(conf_args.out) / "confusion_dnn.csv", res.dnn);
      write_confusion_csv(fs::path(conf_args.out) / "confusion_ted.csv", res.ted);
      write_manifest(conf_args.out, "confusion", config);
      print_diagonal("dnn", res.dnn);
      print_diagonal("ted", res.ted);
    } else if (rates->parsed()) {
      const auto config = resolve(rate_args);
      TrainedModels models;
      if (rate_models.empty()) {
        models = train_models(config, make_dataset(config));
        save_trained_models(rate_args.out, models);
      } else {
        models = load_models(rate_models);
      }
      const RateReport report = run_rate_experiment(config, &models.dnn, &models.ted);
      write_rate_outputs(rate_args.out, report);
      write_manifest(rate_args.out, "rates", config);
      log(std::to_string(report.collided_samples) + " collided-UE samples over " +
          std::to_string(report.trials) + " trials");
    } else if (asym->parsed()) {
      const auto config = resolve(asym_args);
      const AsymptoticReport report = run_asymptotic_check(config);
      write_asymptotic_csv(fs::path(asym_args.out) / "asymptotic.csv", report);
      write_manifest(asym_args.out, "asymptotic", config);
      if (!report.note.empty()) log(report.note);
    }
  } catch (const FormatError& e) {
    std::cerr << "error: format: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid-argument: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
