// experiment.hpp - experiment driver: single-instance runs, Monte Carlo
// phase-transition sweeps, noisy localization experiments and certificate
// campaigns, with reproducible per-trial seed streams and CSV/JSON output.

#pragma once

#include "atomiclift/localizer.hpp"
#include "atomiclift/sdp_solver.hpp"
#include "atomiclift/serialization.hpp"
#include "atomiclift/signal_model.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace atomiclift {

struct ExperimentConfig {
  std::string mode = "run";  // run | sweep | noisy | certify | synth
  std::string preset;        // fig1 | fig2 | "" (fig1: fourier-row B, all-ones h;
                             //  fig2: gaussian B and h)
  std::vector<int> N_list{64};
  std::vector<int> K_list{6};
  std::vector<int> L_list{3};
  std::vector<int> M_list{64};  // certify mode grid
  int trials = 20;
  std::uint64_t seed = 20160525;
  std::string subspace_kind = "fourier-row";  // + "all-ones" (deterministic b_n = 1)
  std::string h_spec = "all-ones";            // all-ones | gaussian | complex-gaussian
  Real dynamic_range_db = 10.0;
  bool enforce_separation = true;  // delta >= 1/N
  Real delta_min_override = -1.0;  // < 0: use 1/N
  Real snr_db = 15.0;              // noisy mode; used when sigma < 0
  Real sigma = -1.0;
  Real success_threshold = 1e-3;   // success iff normalized error below this
  Real match_radius_n = 0.5;       // match radius = this / N
  Real certify_delta_factor = 1.5; // support separation = factor / M
  int jobs = 0;                    // 0: hardware concurrency
  std::string out_dir = ".";
  std::string out_stem = "atomiclift";
  bool dump_dual = false;
  bool plot_data = false;
  int time_domain_points = 512;
  SolverOptions solver;
  LocalizeOptions localize;
  bool localize_tol_explicit = false;  // peak_tol given in config
};

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& cfg);
void apply_preset(ExperimentConfig& cfg);

// Builds the subspace for the configured kind ("all-ones" gives the
// deterministic b_n = 1 rows used by scalar-certificate cells).
SubspaceModel make_subspace(const std::string& kind, int N, int L, std::uint64_t seed);

CVec make_h(const std::string& spec, int L, Rng& rng);

// One synthesized trial: spikes, subspace, h, optional noise, measurements.
ProblemInstance make_trial_instance(const ExperimentConfig& cfg, int N, int K, int L,
                                    std::uint64_t trial_seed, bool noisy);

struct TrialRecord {
  int N = 0, K = 0, L = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  Real normalized_err = 0.0;
  bool success = false;
  bool converged = false;
  int iterations = 0;
  Real solve_seconds = 0.0;
  int matched = 0;
  int spurious = 0;
  bool all_matched = false;
  Real max_delay_error = 0.0;
};

struct SweepCell {
  int N = 0, K = 0, L = 0;
  int trials = 0;
  int successes = 0;
  Real success_rate = 0.0;
  Real mean_err = 0.0;
  Real median_err = 0.0;
  Real mean_time = 0.0;
  Real mean_iterations = 0.0;
  std::uint64_t seed_base = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::vector<TrialRecord> records;
};

// Full pipeline on one instance: solve, localize, factorize, fit
// amplitudes, score against the ground truth.
struct PipelineOutcome {
  LiftedSolution solution;
  DualQuality dual;
  LocalizationResult localization;
  MatchReport match;
  Real normalized_err = 0.0;
  Real solve_seconds = 0.0;
};

PipelineOutcome run_pipeline(const ProblemInstance& instance, const ExperimentConfig& cfg);

Json run_instance(const ExperimentConfig& cfg);

SweepResult phase_transition_sweep(const ExperimentConfig& cfg);

struct NoisyTrialRecord {
  TrialRecord base;
  Real epsilon = 0.0;
  Real sigma = 0.0;
  Real max_amplitude_error = 0.0;
};

struct NoisyResult {
  std::vector<NoisyTrialRecord> records;
  int all_matched_count = 0;
};

NoisyResult noisy_localization_experiment(const ExperimentConfig& cfg);

struct CertifyCell {
  int M = 0, K = 0, L = 0;
  int seeds = 0;
  int passes = 0;
  Real pass_rate = 0.0;
  Real mean_off_support_max = 0.0;
  Real max_far_region = 0.0;
  Real mean_condition = 0.0;
};

struct CertifyResult {
  std::vector<CertifyCell> cells;
  std::vector<Json> reports;  // per (cell, seed) validation reports
};

CertifyResult certificate_campaign(const ExperimentConfig& cfg);

// CSV emitters; the leading "# generated=..." comment line is excluded
// from determinism comparisons.
std::string sweep_cells_csv(const SweepResult& result);
std::string trial_records_csv(const std::vector<TrialRecord>& records);
std::string certify_cells_csv(const CertifyResult& result);
std::string dual_polynomial_csv(const CVec& p, const SubspaceModel& subspace,
                                const IndexingConvention& indexing, int points);

// Dispatches n tasks over a small worker pool; task results must be
// written to preallocated slots so aggregation is order-independent.
void parallel_for(int n_tasks, int jobs, const std::function<void(int)>& fn);

int effective_jobs(int requested);

}  // namespace atomiclift
