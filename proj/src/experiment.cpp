#include "atomiclift/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>
#include <thread>

namespace atomiclift {

namespace {

std::string timestamp_line() {
  const std::time_t now = std::time(nullptr);
  char buf[64];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string("# generated=") + buf + "\n";
}

Real median_of(std::vector<Real> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int effective_jobs(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int n_tasks, int jobs, const std::function<void(int)>& fn) {
  jobs = std::min(effective_jobs(jobs), n_tasks);
  if (jobs <= 1) {
    for (int i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  auto get_list = [&](const char* plural, const char* single, std::vector<int>& out) {
    if (j.contains(plural)) out = j.at(plural).get<std::vector<int>>();
    else if (j.contains(single)) out = {j.at(single).get<int>()};
  };
  if (j.contains("mode")) cfg.mode = j.at("mode").get<std::string>();
  if (j.contains("preset")) cfg.preset = j.at("preset").get<std::string>();
  get_list("N_list", "N", cfg.N_list);
  get_list("K_list", "K", cfg.K_list);
  get_list("L_list", "L", cfg.L_list);
  get_list("M_list", "M", cfg.M_list);
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("subspace")) cfg.subspace_kind = j.at("subspace").get<std::string>();
  if (j.contains("h_spec")) cfg.h_spec = j.at("h_spec").get<std::string>();
  if (j.contains("dynamic_range_db")) cfg.dynamic_range_db = j.at("dynamic_range_db").get<Real>();
  if (j.contains("enforce_separation")) cfg.enforce_separation = j.at("enforce_separation").get<bool>();
  if (j.contains("delta_min")) cfg.delta_min_override = j.at("delta_min").get<Real>();
  if (j.contains("snr_db")) cfg.snr_db = j.at("snr_db").get<Real>();
  if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<Real>();
  if (j.contains("success_threshold")) cfg.success_threshold = j.at("success_threshold").get<Real>();
  if (j.contains("match_radius_n")) cfg.match_radius_n = j.at("match_radius_n").get<Real>();
  if (j.contains("certify_delta_factor"))
    cfg.certify_delta_factor = j.at("certify_delta_factor").get<Real>();
  if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("out_stem")) cfg.out_stem = j.at("out_stem").get<std::string>();
  if (j.contains("dump_dual")) cfg.dump_dual = j.at("dump_dual").get<bool>();
  if (j.contains("plot_data")) cfg.plot_data = j.at("plot_data").get<bool>();
  if (j.contains("time_domain_points"))
    cfg.time_domain_points = j.at("time_domain_points").get<int>();

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (s.contains("rho")) cfg.solver.rho_init = s.at("rho").get<Real>();
    if (s.contains("adapt_rho")) cfg.solver.adapt_rho = s.at("adapt_rho").get<bool>();
    if (s.contains("tol_primal")) cfg.solver.tol_primal = s.at("tol_primal").get<Real>();
    if (s.contains("tol_dual")) cfg.solver.tol_dual = s.at("tol_dual").get<Real>();
    if (s.contains("tol_gap")) cfg.solver.tol_gap = s.at("tol_gap").get<Real>();
    if (s.contains("max_iter")) cfg.solver.max_iter = s.at("max_iter").get<int>();
    if (s.contains("check_interval")) cfg.solver.check_interval = s.at("check_interval").get<int>();
    if (s.contains("dual_grid_min")) cfg.solver.dual_grid_min = s.at("dual_grid_min").get<int>();
    if (s.contains("dual_grid_per_n"))
      cfg.solver.dual_grid_per_n = s.at("dual_grid_per_n").get<int>();
    if (s.contains("trace")) cfg.solver.trace = s.at("trace").get<bool>();
    if (s.contains("trace_path")) cfg.solver.trace_path = s.at("trace_path").get<std::string>();
  }
  if (j.contains("localize")) {
    const auto& l = j.at("localize");
    if (l.contains("grid_per_n")) cfg.localize.grid_per_n = l.at("grid_per_n").get<int>();
    if (l.contains("newton_steps")) cfg.localize.newton_steps = l.at("newton_steps").get<int>();
    if (l.contains("peak_tol")) {
      cfg.localize.peak_tol = l.at("peak_tol").get<Real>();
      cfg.localize_tol_explicit = true;
    }
    if (l.contains("cluster_radius_n"))
      cfg.localize.cluster_radius_n = l.at("cluster_radius_n").get<Real>();
  }
  apply_preset(cfg);
  return cfg;
}

Json config_to_json(const ExperimentConfig& cfg) {
  return Json{{"mode", cfg.mode},
              {"preset", cfg.preset},
              {"N_list", cfg.N_list},
              {"K_list", cfg.K_list},
              {"L_list", cfg.L_list},
              {"M_list", cfg.M_list},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"subspace", cfg.subspace_kind},
              {"h_spec", cfg.h_spec},
              {"dynamic_range_db", cfg.dynamic_range_db},
              {"enforce_separation", cfg.enforce_separation},
              {"delta_min", cfg.delta_min_override},
              {"snr_db", cfg.snr_db},
              {"sigma", cfg.sigma},
              {"success_threshold", cfg.success_threshold},
              {"match_radius_n", cfg.match_radius_n},
              {"certify_delta_factor", cfg.certify_delta_factor},
              {"jobs", cfg.jobs}};
}

void apply_preset(ExperimentConfig& cfg) {
  if (cfg.preset == "fig1") {
    cfg.subspace_kind = "fourier-row";
    cfg.h_spec = "all-ones";
  } else if (cfg.preset == "fig2") {
    cfg.subspace_kind = "real-gaussian";
    cfg.h_spec = "gaussian";
  } else if (!cfg.preset.empty()) {
    throw std::invalid_argument("unknown preset: " + cfg.preset);
  }
}

SubspaceModel make_subspace(const std::string& kind, int N, int L, std::uint64_t seed) {
  if (kind == "all-ones") return SubspaceModel(CMat::Ones(N, L), SubspaceKind::Explicit);
  return sample_subspace(subspace_kind_from_name(kind), N, L, seed);
}

CVec make_h(const std::string& spec, int L, Rng& rng) {
  CVec h(L);
  if (spec == "all-ones") {
    h.setOnes();
  } else if (spec == "gaussian") {
    for (int i = 0; i < L; ++i) h(i) = Complex(rng.normal(), 0.0);
  } else if (spec == "complex-gaussian") {
    for (int i = 0; i < L; ++i) h(i) = rng.complex_normal();
  } else {
    throw std::invalid_argument("unknown h spec: " + spec);
  }
  if (h.norm() == 0.0) h(0) = 1.0;  // vanishing Gaussian draw, keep instance well posed
  return h;
}

ProblemInstance make_trial_instance(const ExperimentConfig& cfg, int N, int K, int L,
                                    std::uint64_t trial_seed, bool noisy) {
  const IndexingConvention indexing = IndexingConvention::shifted(N);
  const AmplitudeSpec amp{cfg.dynamic_range_db};

  SpikeSignal spikes;
  if (K > 0) {
    const Real delta_min = cfg.delta_min_override >= 0.0 ? cfg.delta_min_override : 1.0 / N;
    spikes = cfg.enforce_separation
                 ? draw_separated_spikes(K, delta_min, amp, derive_seed(trial_seed, 1))
                 : draw_unconstrained_spikes(K, amp, derive_seed(trial_seed, 1));
  } else {
    spikes = SpikeSignal{RVec(0), CVec(0)};
  }

  SubspaceModel subspace = make_subspace(cfg.subspace_kind, N, L, derive_seed(trial_seed, 2));
  Rng h_rng(derive_seed(trial_seed, 3));
  const CVec h = make_h(cfg.h_spec, L, h_rng);

  const CVec x = synth_spike_spectrum(spikes, indexing);
  const CVec g = synth_psf(subspace, h);
  const CVec clean = measure(g, x);

  CVec w = CVec::Zero(N);
  Real epsilon = 0.0;
  if (noisy) {
    Real sigma = cfg.sigma;
    if (sigma < 0.0) {
      // SNR = 10 log10(||X(Z*)||^2 / (N sigma^2))
      sigma = std::sqrt(clean.squaredNorm() / (N * std::pow(10.0, cfg.snr_db / 10.0)));
    }
    Rng noise_rng(derive_seed(trial_seed, 4));
    for (int n = 0; n < N; ++n) w(n) = sigma * noise_rng.complex_normal();
    epsilon = sigma * std::sqrt(N + 2.0 * std::sqrt(N * std::log(static_cast<Real>(N))));
  }

  ProblemInstance instance{clean + w, std::move(subspace), epsilon, indexing,
                           GroundTruth{std::move(spikes), h, w}};
  instance.validate();
  return instance;
}

PipelineOutcome run_pipeline(const ProblemInstance& instance, const ExperimentConfig& cfg) {
  PipelineOutcome out;

  const auto t0 = std::chrono::steady_clock::now();
  out.solution = instance.epsilon > 0.0 ? solve_noisy(instance, cfg.solver)
                                        : solve_noiseless(instance, cfg.solver);
  out.solve_seconds =
      std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();

  out.dual = extract_dual(out.solution, instance, cfg.solver);

  LocalizeOptions lopts = cfg.localize;
  if (!cfg.localize_tol_explicit) lopts.peak_tol = instance.epsilon > 0.0 ? 1e-2 : 1e-4;
  const PeakSet peaks =
      localize_peaks(out.solution.p, instance.subspace, instance.indexing, lopts);

  out.localization.delays = peaks.delays;
  out.localization.peak_norms = peaks.peak_norms;
  out.localization.empty_result = peaks.empty_result;
  out.localization.dual_infeasible_warning = peaks.dual_infeasible_warning;

  if (out.solution.Z.norm() > 1e-12) {
    const Rank1Factors f = factorize_rank1(out.solution.Z);
    out.localization.h = f.h;
    if (!peaks.delays.empty()) {
      const AmplitudeFit fit = recover_amplitudes(f.x, instance.indexing, peaks.delays);
      // fitted a_k are atomic scale; convert back to abar = a / sqrt(N)
      out.localization.amplitudes =
          fit.amplitudes / std::sqrt(static_cast<Real>(instance.n_samples()));
      out.localization.amplitude_ill_conditioned = fit.ill_conditioned;
    }
  } else {
    out.localization.h = CVec::Zero(instance.subspace_dim());
  }

  if (instance.truth) {
    if (instance.truth->spikes.count() > 0) {
      out.normalized_err = normalized_error(out.solution.Z, instance.lifted_truth());
      out.match = match_spikes(instance.truth->spikes, out.localization,
                               cfg.match_radius_n / instance.n_samples());
      out.localization.beta = out.match.beta;
    } else {
      out.normalized_err = std::numeric_limits<Real>::quiet_NaN();
      for (std::size_t j = 0; j < out.localization.delays.size(); ++j)
        out.match.false_alarms.push_back(static_cast<int>(j));
    }
  } else {
    out.normalized_err = std::numeric_limits<Real>::quiet_NaN();
  }
  return out;
}

namespace {

// Inverse-DFT rendering of sampled spectra for time-domain plots.
Json time_domain_json(const CVec& samples, const IndexingConvention& indexing, int points) {
  Json taus = Json::array(), series = Json::array();
  const int N = indexing.size();
  for (int t = 0; t < points; ++t) {
    const Real tau = static_cast<Real>(t) / points;
    Complex acc(0.0, 0.0);
    for (int i = 0; i < N; ++i)
      acc += samples(i) * std::polar(1.0, kTwoPi * indexing.index(i) * tau);
    taus.push_back(tau);
    series.push_back(to_json(acc / static_cast<Real>(N)));
  }
  return Json{{"tau", taus}, {"values", series}};
}

TrialRecord make_record(const ExperimentConfig& cfg, const PipelineOutcome& out, int N,
                        int K, int L, int trial, std::uint64_t seed) {
  TrialRecord rec;
  rec.N = N;
  rec.K = K;
  rec.L = L;
  rec.trial = trial;
  rec.seed = seed;
  rec.normalized_err = out.normalized_err;
  rec.success = std::isfinite(out.normalized_err) && out.normalized_err < cfg.success_threshold;
  rec.converged = out.solution.diag.converged;
  rec.iterations = out.solution.diag.iterations;
  rec.solve_seconds = out.solve_seconds;
  rec.matched = static_cast<int>(out.match.matches.size());
  rec.spurious = static_cast<int>(out.match.false_alarms.size());
  rec.all_matched = K > 0 && out.match.missed.empty() && rec.matched == K;
  rec.max_delay_error = out.match.max_delay_error;
  return rec;
}

}  // namespace

Json run_instance(const ExperimentConfig& cfg) {
  const int N = cfg.N_list.at(0);
  const int K = cfg.K_list.at(0);
  const int L = cfg.L_list.at(0);
  const bool noisy = cfg.mode == "noisy" || cfg.sigma >= 0.0;
  const std::uint64_t trial_seed = derive_seed(cfg.seed, 0);
  const ProblemInstance instance = make_trial_instance(cfg, N, K, L, trial_seed, noisy);
  const PipelineOutcome out = run_pipeline(instance, cfg);

  Json match = Json::array();
  for (const auto& m : out.match.matches)
    match.push_back(Json{{"truth_index", m.truth_index},
                         {"estimate_index", m.estimate_index},
                         {"delay_error", m.delay_error},
                         {"amplitude_error", m.amplitude_error}});

  Json report{
      {"config", config_to_json(cfg)},
      {"instance",
       Json{{"N", N}, {"K", K}, {"L", L}, {"seed", trial_seed}, {"epsilon", instance.epsilon}}},
      {"solver", Json{{"converged", out.solution.diag.converged},
                      {"status", out.solution.diag.status},
                      {"iterations", out.solution.diag.iterations},
                      {"primal_residual", out.solution.diag.primal_residual},
                      {"dual_residual", out.solution.diag.dual_residual},
                      {"gap", out.solution.diag.gap},
                      {"constraint_residual", out.solution.diag.constraint_residual},
                      {"min_eigenvalue", out.solution.diag.min_eigenvalue},
                      {"objective", out.solution.objective},
                      {"solve_seconds", out.solve_seconds}}},
      {"dual", Json{{"dual_norm", out.dual.dual_norm},
                    {"dual_objective", out.dual.dual_objective},
                    {"gap", out.dual.gap},
                    {"warn", out.dual.warn}}},
      {"localization", to_json(out.localization)},
      {"match", Json{{"matches", match},
                     {"missed", out.match.missed},
                     {"false_alarms", out.match.false_alarms},
                     {"beta", to_json(out.match.beta)},
                     {"max_delay_error", out.match.max_delay_error},
                     {"max_amplitude_error", out.match.max_amplitude_error}}}};
  if (std::isfinite(out.normalized_err)) {
    report["normalized_error"] = out.normalized_err;
  } else {
    report["normalized_error"] = nullptr;  // undefined for an empty signal
  }
  if (instance.truth) {
    report["truth"] = Json{{"spikes", to_json(instance.truth->spikes)},
                           {"h", to_json(instance.truth->h)}};
  }
  const CVec g = synth_psf(instance.subspace, instance.truth->h);
  report["time_domain"] =
      Json{{"psf", time_domain_json(g, instance.indexing, cfg.time_domain_points)},
           {"measured", time_domain_json(instance.y, instance.indexing, cfg.time_domain_points)}};
  return report;
}

SweepResult phase_transition_sweep(const ExperimentConfig& cfg) {
  struct Cell {
    int N, K, L;
  };
  std::vector<Cell> cells;
  for (int N : cfg.N_list)
    for (int K : cfg.K_list)
      for (int L : cfg.L_list) cells.push_back({N, K, L});

  const int total = static_cast<int>(cells.size()) * cfg.trials;
  SweepResult result;
  result.records.resize(total);

  const bool noisy = cfg.sigma >= 0.0;
  parallel_for(total, cfg.jobs, [&](int g) {
    const Cell& cell = cells[g / cfg.trials];
    const int trial = g % cfg.trials;
    const std::uint64_t seed = derive_seed(cfg.seed, g);
    const ProblemInstance instance =
        make_trial_instance(cfg, cell.N, cell.K, cell.L, seed, noisy);
    const PipelineOutcome out = run_pipeline(instance, cfg);
    result.records[g] = make_record(cfg, out, cell.N, cell.K, cell.L, trial, seed);
  });

  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepCell sc;
    sc.N = cells[c].N;
    sc.K = cells[c].K;
    sc.L = cells[c].L;
    sc.trials = cfg.trials;
    sc.seed_base = static_cast<std::uint64_t>(c) * cfg.trials;
    std::vector<Real> errs;
    for (int t = 0; t < cfg.trials; ++t) {
      const TrialRecord& r = result.records[c * cfg.trials + t];
      sc.successes += r.success ? 1 : 0;
      if (std::isfinite(r.normalized_err)) errs.push_back(r.normalized_err);
      sc.mean_time += r.solve_seconds;
      sc.mean_iterations += r.iterations;
    }
    sc.success_rate = static_cast<Real>(sc.successes) / cfg.trials;
    sc.mean_err = errs.empty() ? 0.0
                               : std::accumulate(errs.begin(), errs.end(), 0.0) / errs.size();
    sc.median_err = median_of(errs);
    sc.mean_time /= cfg.trials;
    sc.mean_iterations /= cfg.trials;
    result.cells.push_back(sc);
  }
  return result;
}

NoisyResult noisy_localization_experiment(const ExperimentConfig& cfg) {
  const int N = cfg.N_list.at(0);
  const int K = cfg.K_list.at(0);
  const int L = cfg.L_list.at(0);

  NoisyResult result;
  result.records.resize(cfg.trials);
  parallel_for(cfg.trials, cfg.jobs, [&](int t) {
    const std::uint64_t seed = derive_seed(cfg.seed, t);
    const ProblemInstance instance = make_trial_instance(cfg, N, K, L, seed, true);
    const PipelineOutcome out = run_pipeline(instance, cfg);
    NoisyTrialRecord rec;
    rec.base = make_record(cfg, out, N, K, L, t, seed);
    rec.epsilon = instance.epsilon;
    rec.sigma = instance.truth->w.size() > 0
                    ? instance.truth->w.norm() / std::sqrt(static_cast<Real>(N))
                    : 0.0;
    rec.max_amplitude_error = out.match.max_amplitude_error;
    result.records[t] = rec;
  });
  for (const auto& r : result.records)
    if (r.base.all_matched) ++result.all_matched_count;
  return result;
}

CertifyResult certificate_campaign(const ExperimentConfig& cfg) {
  struct Cell {
    int M, K, L;
  };
  std::vector<Cell> cells;
  for (int M : cfg.M_list)
    for (int K : cfg.K_list)
      for (int L : cfg.L_list) cells.push_back({M, K, L});

  const int total = static_cast<int>(cells.size()) * cfg.trials;
  std::vector<ValidationReport> reports(total);
  std::vector<Json> report_json(total);

  parallel_for(total, cfg.jobs, [&](int g) {
    const Cell& cell = cells[g / cfg.trials];
    const int t = g % cfg.trials;
    const std::uint64_t seed = derive_seed(cfg.seed, g);
    const FejerTable table = fejer_coeffs(cell.M);
    const Real delta = cfg.certify_delta_factor / cell.M;

    const AmplitudeSpec amp{cfg.dynamic_range_db};
    const SpikeSignal spikes = draw_separated_spikes(cell.K, delta, amp, derive_seed(seed, 1));
    const SubspaceModel subspace =
        make_subspace(cfg.subspace_kind, table.size(), cell.L, derive_seed(seed, 2));
    Rng h_rng(derive_seed(seed, 3));
    const CVec h = make_h(cfg.h_spec, cell.L, h_rng);

    const CertificateWorkspace ws =
        build_certificate(table, subspace, spikes.delays, spikes.signs(), h);
    reports[g] = validate_certificate(ws);
    report_json[g] = Json{{"M", cell.M}, {"K", cell.K},       {"L", cell.L},
                          {"trial", t},  {"seed", seed},      {"delta", delta},
                          {"report", to_json(reports[g])}};
  });

  CertifyResult result;
  result.reports = std::move(report_json);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CertifyCell cc;
    cc.M = cells[c].M;
    cc.K = cells[c].K;
    cc.L = cells[c].L;
    cc.seeds = cfg.trials;
    for (int t = 0; t < cfg.trials; ++t) {
      const ValidationReport& r = reports[c * cfg.trials + t];
      cc.passes += r.pass ? 1 : 0;
      cc.mean_off_support_max += r.off_support_max;
      cc.max_far_region = std::max(cc.max_far_region, r.far_region_max);
      cc.mean_condition += std::isfinite(r.gamma_condition) ? r.gamma_condition : 0.0;
    }
    cc.pass_rate = static_cast<Real>(cc.passes) / cfg.trials;
    cc.mean_off_support_max /= cfg.trials;
    cc.mean_condition /= cfg.trials;
    result.cells.push_back(cc);
  }
  return result;
}

std::string sweep_cells_csv(const SweepResult& result) {
  std::ostringstream os;
  os << timestamp_line();
  os << "N,K,L,trials,successes,success_rate,mean_err,median_err,mean_time_s,mean_iterations,"
        "seed_base,KL\n";
  os.precision(12);
  for (const auto& c : result.cells)
    os << c.N << ',' << c.K << ',' << c.L << ',' << c.trials << ',' << c.successes << ','
       << c.success_rate << ',' << c.mean_err << ',' << c.median_err << ',' << c.mean_time
       << ',' << c.mean_iterations << ',' << c.seed_base << ',' << c.K * c.L << '\n';
  return os.str();
}

std::string trial_records_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << timestamp_line();
  os << "N,K,L,trial,seed,normalized_err,success,converged,iterations,solve_seconds,matched,"
        "spurious,all_matched,max_delay_error\n";
  os.precision(12);
  for (const auto& r : records)
    os << r.N << ',' << r.K << ',' << r.L << ',' << r.trial << ',' << r.seed << ','
       << r.normalized_err << ',' << (r.success ? 1 : 0) << ',' << (r.converged ? 1 : 0) << ','
       << r.iterations << ',' << r.solve_seconds << ',' << r.matched << ',' << r.spurious << ','
       << (r.all_matched ? 1 : 0) << ',' << r.max_delay_error << '\n';
  return os.str();
}

std::string certify_cells_csv(const CertifyResult& result) {
  std::ostringstream os;
  os << timestamp_line();
  os << "M,K,L,seeds,passes,pass_rate,mean_off_support_max,max_far_region,mean_condition\n";
  os.precision(12);
  for (const auto& c : result.cells)
    os << c.M << ',' << c.K << ',' << c.L << ',' << c.seeds << ',' << c.passes << ','
       << c.pass_rate << ',' << c.mean_off_support_max << ',' << c.max_far_region << ','
       << c.mean_condition << '\n';
  return os.str();
}

std::string dual_polynomial_csv(const CVec& p, const SubspaceModel& subspace,
                                const IndexingConvention& indexing, int points) {
  std::ostringstream os;
  os << timestamp_line() << "tau,dual_poly_norm\n";
  os.precision(12);
  RVec taus(points);
  for (int i = 0; i < points; ++i) taus(i) = static_cast<Real>(i) / points;
  const RVec norms = dual_polynomial_norms(p, subspace, indexing, taus);
  for (int i = 0; i < points; ++i) os << taus(i) << ',' << norms(i) << '\n';
  return os.str();
}

}  // namespace atomiclift
