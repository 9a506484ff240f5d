// atomiclift_main.cpp - command-line driver.
//
// Subcommands: synth, run, sweep, noisy, certify. Each takes --config
// <path.json> plus overrides (--seed, --jobs, --out). Exit code 0 on
// completion (including recorded per-trial failures); nonzero only on
// configuration or I/O errors. The environment variable ATOMICLIFT_OUT_DIR
// sets the default output directory.

#include "atomiclift/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace atomiclift;

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = -1;
  bool dump_dual = false;
  bool plot_data = false;
};

ExperimentConfig load_config(const CliOverrides& cli, const std::string& mode) {
  Json j = Json::object();
  if (!cli.config_path.empty()) {
    std::ifstream in(cli.config_path);
    if (!in) throw std::invalid_argument("cannot open config: " + cli.config_path);
    in >> j;
  }
  ExperimentConfig cfg = config_from_json(j);
  cfg.mode = mode;
  if (cli.seed_set) cfg.seed = cli.seed;
  if (cli.jobs >= 0) cfg.jobs = cli.jobs;
  if (!cli.out_dir.empty()) {
    cfg.out_dir = cli.out_dir;
  } else if (cfg.out_dir == "." && std::getenv("ATOMICLIFT_OUT_DIR")) {
    cfg.out_dir = std::getenv("ATOMICLIFT_OUT_DIR");
  }
  if (cli.dump_dual) cfg.dump_dual = true;
  if (cli.plot_data) cfg.plot_data = true;
  return cfg;
}

std::filesystem::path out_path(const ExperimentConfig& cfg, const std::string& suffix) {
  std::filesystem::create_directories(cfg.out_dir);
  return std::filesystem::path(cfg.out_dir) / (cfg.out_stem + suffix);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  std::cout << "wrote " << path.string() << "\n";
}

int run_mode(const std::string& mode, const CliOverrides& cli) {
  ExperimentConfig cfg = load_config(cli, mode);

  if (mode == "synth") {
    const std::uint64_t trial_seed = derive_seed(cfg.seed, 0);
    const bool noisy = cfg.sigma >= 0.0;
    const ProblemInstance instance = make_trial_instance(
        cfg, cfg.N_list.at(0), cfg.K_list.at(0), cfg.L_list.at(0), trial_seed, noisy);
    write_file(out_path(cfg, "_instance.json"), to_json(instance).dump(2));
    return 0;
  }
  if (mode == "run") {
    const Json report = run_instance(cfg);
    write_file(out_path(cfg, "_run.json"), report.dump(2));
    if (cfg.dump_dual) {
      const std::uint64_t trial_seed = derive_seed(cfg.seed, 0);
      const ProblemInstance instance = make_trial_instance(
          cfg, cfg.N_list.at(0), cfg.K_list.at(0), cfg.L_list.at(0), trial_seed,
          cfg.mode == "noisy" || cfg.sigma >= 0.0);
      const PipelineOutcome out = run_pipeline(instance, cfg);
      write_file(out_path(cfg, "_dual.csv"),
                 dual_polynomial_csv(out.solution.p, instance.subspace, instance.indexing,
                                     16 * instance.n_samples()));
    }
    std::cout << report["solver"].dump() << "\n";
    return 0;
  }
  if (mode == "sweep") {
    const SweepResult result = phase_transition_sweep(cfg);
    write_file(out_path(cfg, "_sweep.csv"), sweep_cells_csv(result));
    write_file(out_path(cfg, "_trials.csv"), trial_records_csv(result.records));
    return 0;
  }
  if (mode == "noisy") {
    const NoisyResult result = noisy_localization_experiment(cfg);
    std::vector<TrialRecord> base;
    base.reserve(result.records.size());
    for (const auto& r : result.records) base.push_back(r.base);
    write_file(out_path(cfg, "_noisy_trials.csv"), trial_records_csv(base));
    Json summary{{"trials", static_cast<int>(result.records.size())},
                 {"all_matched_count", result.all_matched_count}};
    write_file(out_path(cfg, "_noisy.json"), summary.dump(2));
    std::cout << summary.dump() << "\n";
    return 0;
  }
  if (mode == "certify") {
    const CertifyResult result = certificate_campaign(cfg);
    write_file(out_path(cfg, "_certify.csv"), certify_cells_csv(result));
    Json reports = Json::array();
    for (const auto& r : result.reports) reports.push_back(r);
    write_file(out_path(cfg, "_certify.json"), reports.dump(2));
    return 0;
  }
  throw std::invalid_argument("unknown mode " + mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blind spike deconvolution via lifted atomic-norm minimization"};
  app.require_subcommand(1);

  CliOverrides cli;
  for (const std::string mode : {"synth", "run", "sweep", "noisy", "certify"}) {
    auto* sub = app.add_subcommand(mode);
    sub->add_option("--config", cli.config_path, "JSON configuration file");
    sub->add_option("--out", cli.out_dir, "output directory");
    sub->add_option("--seed", cli.seed, "master seed override")
        ->each([&](const std::string&) { cli.seed_set = true; });
    sub->add_option("--jobs", cli.jobs, "worker pool size (0 = hardware)");
    sub->add_flag("--dump-dual", cli.dump_dual, "emit (tau, ||Q(tau)||) CSV");
    sub->add_flag("--plot-data", cli.plot_data, "emit plot-ready series");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run_mode(app.get_subcommands().front()->get_name(), cli);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
