// localizer.hpp - spike localization from the dual polynomial
// Q(tau) = (X*(p))^H c(tau), rank-one factorization of the recovered
// lifted matrix, amplitude fitting and recovery scoring.

#pragma once

#include "atomiclift/signal_model.hpp"
#include "atomiclift/types.hpp"

#include <optional>
#include <vector>

namespace atomiclift {

// Q^(m)(tau) = (1/sqrt(N)) sum_n (-j2pi n)^m e^{-j2pi tau n} conj(p_n) b_n.
CVec dual_polynomial_eval(const CVec& p, const SubspaceModel& subspace,
                          const IndexingConvention& indexing, Real tau, int deriv = 0);

// Batched evaluation of ||Q(tau)||_2 (for plots and grid scans).
RVec dual_polynomial_norms(const CVec& p, const SubspaceModel& subspace,
                           const IndexingConvention& indexing, const RVec& taus);

struct LocalizeOptions {
  int grid_per_n = 16;       // grid size = grid_per_n * N
  int min_grid = 512;
  int newton_steps = 5;
  Real peak_tol = 1e-4;      // accept peaks with ||Q|| >= 1 - peak_tol
  Real cluster_radius_n = 0.25;  // merge radius, in units of 1/N
  Real dual_feas_warn = 1e-3;    // warn when ||X*(p)||_A^* > 1 + 10*tol_dual
};

struct PeakSet {
  std::vector<Real> delays;      // sorted ascending
  std::vector<Real> peak_norms;  // ||Q|| at each delay
  bool empty_result = false;     // no peak reached the threshold
  bool dual_infeasible_warning = false;
};

PeakSet localize_peaks(const CVec& p, const SubspaceModel& subspace,
                       const IndexingConvention& indexing, const LocalizeOptions& opts = {});

struct Rank1Factors {
  CVec x;         // N, carries the scale
  CVec h;         // L, unit norm, dominant entry real positive
  Real residual;  // sigma_2 / sigma_1
};

// Best rank-one factorization Z ~= x h^T via SVD. Throws on Z ~= 0.
Rank1Factors factorize_rank1(const CMat& Z);

struct AmplitudeFit {
  CVec amplitudes;   // abar_k
  Real condition;    // of the Vandermonde-type system
  Real residual;     // ||V a - x|| / ||x||
  bool ill_conditioned = false;  // condition > 1e8
};

// Least-squares fit of x against [sqrt(N) c(tau_1) ... sqrt(N) c(tau_K)].
AmplitudeFit recover_amplitudes(const CVec& x, const IndexingConvention& indexing,
                                const std::vector<Real>& delays);

struct LocalizationResult {
  std::vector<Real> delays;
  std::vector<Real> peak_norms;
  CVec amplitudes;  // abar-scale estimates
  CVec h;           // unit norm
  Complex beta = Complex(1.0, 0.0);  // scale-alignment factor vs truth (when scored)
  bool empty_result = false;
  bool dual_infeasible_warning = false;
  bool amplitude_ill_conditioned = false;
};

struct SpikeMatch {
  int truth_index;
  int estimate_index;
  Real delay_error;       // wrap-around
  Real amplitude_error;   // after global scale alignment
};

struct MatchReport {
  std::vector<SpikeMatch> matches;
  std::vector<int> missed;        // truth indices with no estimate in radius
  std::vector<int> false_alarms;  // estimate indices with no truth in radius
  Complex beta = Complex(1.0, 0.0);  // global complex scale absorbed
  Real max_delay_error = 0.0;
  Real max_amplitude_error = 0.0;
  bool all_matched() const { return missed.empty(); }
};

// Optimal one-to-one assignment of estimated to true spikes within the
// wrap-around radius (default 0.5/N chosen by the caller). The global
// complex scale beta = <a, ahat> / ||ahat||^2 is removed before amplitude
// errors are reported; it absorbs the inherent scaling ambiguity.
MatchReport match_spikes(const SpikeSignal& truth, const LocalizationResult& estimate,
                         Real radius);

Real normalized_error(const CMat& Z_hat, const CMat& Z_star);

}  // namespace atomiclift
