// signal_model.hpp - spike trains, subspace PSF models and the forward
// measurement synthesis in the Fourier domain.
//
// Model: y_n = g_n * x_n + w_n, where x_n = sum_k abar_k e^{-j2pi n tau_k}
// is the spectrum of a K-spike train and g = B h lies in a known
// L-dimensional subspace spanned by the columns of B.

#pragma once

#include "atomiclift/rng.hpp"
#include "atomiclift/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace atomiclift {

// Sparse spike train: delays tau_k in [0,1) (pairwise distinct) with
// complex amplitudes abar_k.
struct SpikeSignal {
  RVec delays;      // tau_k in [0,1)
  CVec amplitudes;  // abar_k (time-domain scale)

  int count() const { return static_cast<int>(delays.size()); }

  // Atomic-scale amplitudes a_k = sqrt(N) * abar_k.
  CVec atomic_amplitudes(int N) const;

  // Unit-modulus signs a_k/|a_k| (equal to the signs of abar_k).
  CVec signs() const;

  // Throws std::domain_error if delays leave [0,1), collide, or the
  // two lists disagree in length.
  void validate() const;
};

enum class SubspaceKind { FourierRow, ComplexGaussian, RealGaussian, Explicit };

// N x L subspace matrix B with rows b_n; g = B h.
class SubspaceModel {
 public:
  SubspaceModel(CMat B, SubspaceKind kind);

  int rows() const { return static_cast<int>(B_.rows()); }  // N
  int cols() const { return static_cast<int>(B_.cols()); }  // L

  const CMat& matrix() const { return B_; }
  SubspaceKind kind() const { return kind_; }

  // b_n as a column vector (n-th row of B, unconjugated).
  CVec row(int n) const { return B_.row(n).transpose(); }

  // Coherence mu = max_{n,i} |B_{n,i}|^2. Exactly 1 for fourier-row;
  // empirical (and non-deterministic across draws) for Gaussian rows.
  Real coherence() const { return coherence_; }
  bool coherence_is_empirical() const { return coherence_empirical_; }

 private:
  CMat B_;
  SubspaceKind kind_;
  Real coherence_;
  bool coherence_empirical_;
};

// c(tau): unit-norm steering vector, entry i = (1/sqrt(N)) e^{-j2pi n_i tau}.
CVec steering_vector(Real tau, const IndexingConvention& indexing);

// Entry-wise tau-derivative of order m of c(tau): factor (-j2pi n)^m.
CVec steering_vector_deriv(Real tau, const IndexingConvention& indexing, int m);

// x_n = sum_k abar_k e^{-j2pi n tau_k}.
CVec synth_spike_spectrum(const SpikeSignal& spikes, const IndexingConvention& indexing);

SubspaceModel sample_subspace(SubspaceKind kind, int N, int L, std::uint64_t seed);

// g = B h.
CVec synth_psf(const SubspaceModel& subspace, const CVec& h);

// y_n = g_n x_n (+ w_n).
CVec measure(const CVec& g, const CVec& x);
CVec measure(const CVec& g, const CVec& x, const CVec& w);

// Minimum pairwise wrap-around distance on the unit circle;
// +infinity for fewer than two delays.
Real min_separation(const RVec& delays);
Real wrap_distance(Real a, Real b);

// Amplitude law: modulus 10^{d/20} with d uniform on [0, dynamic_range_db],
// phase uniform on [0, 2pi).
struct AmplitudeSpec {
  Real dynamic_range_db = 10.0;
};

// K delays with min_separation >= delta_min, amplitudes per spec.
// Rejection sampling with a constructive gap-based fallback, so it
// always terminates. Throws std::invalid_argument if K*delta_min >= 1.
SpikeSignal draw_separated_spikes(int K, Real delta_min, const AmplitudeSpec& amp,
                                  std::uint64_t seed);

// Delays without any separation constraint (plus the same amplitude law).
SpikeSignal draw_unconstrained_spikes(int K, const AmplitudeSpec& amp, std::uint64_t seed);

struct GroundTruth {
  SpikeSignal spikes;
  CVec h;
  CVec w;  // additive noise actually applied (may be zero-length for none)
};

// One measurement problem: y, the subspace, the declared noise level and
// the indexing convention, with optional synthesis ground truth.
struct ProblemInstance {
  CVec y;
  SubspaceModel subspace;
  Real epsilon = 0.0;
  IndexingConvention indexing;
  std::optional<GroundTruth> truth;

  int n_samples() const { return static_cast<int>(y.size()); }
  int subspace_dim() const { return subspace.cols(); }

  bool noiseless() const { return epsilon == 0.0; }

  // Z* = x h^T for the stored ground truth.
  CMat lifted_truth() const;

  // Checks y - diag(Bh) x == w entrywise when ground truth is present.
  void validate() const;
};

}  // namespace atomiclift
