#include "atomiclift/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomiclift {

CVec SpikeSignal::atomic_amplitudes(int N) const {
  return amplitudes * std::sqrt(static_cast<Real>(N));
}

CVec SpikeSignal::signs() const {
  CVec s(amplitudes.size());
  for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
    const Real mag = std::abs(amplitudes(k));
    s(k) = mag > 0 ? amplitudes(k) / mag : Complex(1.0, 0.0);
  }
  return s;
}

void SpikeSignal::validate() const {
  if (delays.size() != amplitudes.size())
    throw std::domain_error("SpikeSignal: delays/amplitudes length mismatch");
  for (Eigen::Index k = 0; k < delays.size(); ++k) {
    if (!(delays(k) >= 0.0 && delays(k) < 1.0))
      throw std::domain_error("SpikeSignal: delay outside [0,1)");
    for (Eigen::Index j = 0; j < k; ++j)
      if (delays(k) == delays(j))
        throw std::domain_error("SpikeSignal: duplicate delays");
  }
}

SubspaceModel::SubspaceModel(CMat B, SubspaceKind kind)
    : B_(std::move(B)), kind_(kind) {
  if (B_.rows() < B_.cols())
    throw std::domain_error("SubspaceModel: requires L <= N");
  coherence_ = B_.cwiseAbs2().maxCoeff();
  coherence_empirical_ = kind_ != SubspaceKind::FourierRow;
  if (kind_ == SubspaceKind::FourierRow) coherence_ = 1.0;
}

CVec steering_vector(Real tau, const IndexingConvention& indexing) {
  if (!(tau >= 0.0 && tau < 1.0))
    throw std::domain_error("steering_vector: tau outside [0,1)");
  return steering_vector_deriv(tau, indexing, 0);
}

CVec steering_vector_deriv(Real tau, const IndexingConvention& indexing, int m) {
  const int N = indexing.size();
  const Real scale = 1.0 / std::sqrt(static_cast<Real>(N));
  CVec c(N);
  for (int i = 0; i < N; ++i) {
    const int n = indexing.index(i);
    Complex v = scale * std::polar(1.0, -kTwoPi * n * tau);
    const Complex d(0.0, -kTwoPi * n);
    for (int j = 0; j < m; ++j) v *= d;
    c(i) = v;
  }
  return c;
}

CVec synth_spike_spectrum(const SpikeSignal& spikes, const IndexingConvention& indexing) {
  spikes.validate();
  const int N = indexing.size();
  CVec x = CVec::Zero(N);
  for (int k = 0; k < spikes.count(); ++k) {
    const Real tau = spikes.delays(k);
    for (int i = 0; i < N; ++i)
      x(i) += spikes.amplitudes(k) * std::polar(1.0, -kTwoPi * indexing.index(i) * tau);
  }
  return x;
}

SubspaceModel sample_subspace(SubspaceKind kind, int N, int L, std::uint64_t seed) {
  if (L > N) throw std::invalid_argument("sample_subspace: L > N");
  Rng rng(seed);
  CMat B(N, L);
  switch (kind) {
    case SubspaceKind::FourierRow:
      for (int n = 0; n < N; ++n) {
        const Real f = rng.uniform();
        for (int i = 0; i < L; ++i) B(n, i) = std::polar(1.0, kTwoPi * i * f);
      }
      break;
    case SubspaceKind::ComplexGaussian:
      for (int n = 0; n < N; ++n)
        for (int i = 0; i < L; ++i) B(n, i) = rng.complex_normal();
      break;
    case SubspaceKind::RealGaussian:
      for (int n = 0; n < N; ++n)
        for (int i = 0; i < L; ++i) B(n, i) = Complex(rng.normal(), 0.0);
      break;
    case SubspaceKind::Explicit:
      throw std::invalid_argument("sample_subspace: explicit kind takes a user matrix");
  }
  return SubspaceModel(std::move(B), kind);
}

CVec synth_psf(const SubspaceModel& subspace, const CVec& h) {
  if (h.size() != subspace.cols())
    throw std::domain_error("synth_psf: h length != subspace dimension");
  return subspace.matrix() * h;
}

CVec measure(const CVec& g, const CVec& x) {
  if (g.size() != x.size()) throw std::domain_error("measure: length mismatch");
  return g.cwiseProduct(x);
}

CVec measure(const CVec& g, const CVec& x, const CVec& w) {
  if (g.size() != x.size() || w.size() != x.size())
    throw std::domain_error("measure: length mismatch");
  return g.cwiseProduct(x) + w;
}

Real wrap_distance(Real a, Real b) {
  Real d = std::abs(a - b);
  d -= std::floor(d);  // reduce mod 1 for inputs outside [0,1)
  return std::min(d, 1.0 - d);
}

Real min_separation(const RVec& delays) {
  const int K = static_cast<int>(delays.size());
  if (K <= 1) return std::numeric_limits<Real>::infinity();
  Real best = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) best = std::min(best, wrap_distance(delays(i), delays(j)));
  return best;
}

namespace {

CVec draw_amplitudes(int K, const AmplitudeSpec& amp, Rng& rng) {
  CVec a(K);
  for (int k = 0; k < K; ++k) {
    const Real db = rng.uniform(0.0, amp.dynamic_range_db);
    a(k) = std::polar(std::pow(10.0, db / 20.0), rng.uniform(0.0, kTwoPi));
  }
  return a;
}

// Gap construction: K circular gaps of delta_min plus uniformly split slack.
RVec constructive_separated_delays(int K, Real delta_min, Rng& rng) {
  RVec gaps(K);
  Real total = 0.0;
  for (int k = 0; k < K; ++k) {
    gaps(k) = rng.uniform();
    total += gaps(k);
  }
  const Real slack = 1.0 - K * delta_min;
  RVec delays(K);
  Real pos = rng.uniform();
  for (int k = 0; k < K; ++k) {
    delays(k) = pos - std::floor(pos);
    pos += delta_min + slack * gaps(k) / total;
  }
  std::sort(delays.begin(), delays.end());
  return delays;
}

}  // namespace

SpikeSignal draw_separated_spikes(int K, Real delta_min, const AmplitudeSpec& amp,
                                  std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("draw_separated_spikes: K must be >= 1");
  if (K * delta_min >= 1.0)
    throw std::invalid_argument("draw_separated_spikes: infeasible (K*delta_min >= 1)");
  Rng rng(seed);

  RVec delays(K);
  bool ok = false;
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
    for (int k = 0; k < K; ++k) delays(k) = rng.uniform();
    ok = K == 1 || min_separation(delays) >= delta_min;
  }
  if (!ok) delays = constructive_separated_delays(K, delta_min, rng);

  std::sort(delays.begin(), delays.end());
  SpikeSignal s{delays, draw_amplitudes(K, amp, rng)};
  s.validate();
  return s;
}

SpikeSignal draw_unconstrained_spikes(int K, const AmplitudeSpec& amp, std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("draw_unconstrained_spikes: K must be >= 1");
  Rng rng(seed);
  RVec delays(K);
  for (int k = 0; k < K; ++k) delays(k) = rng.uniform();
  std::sort(delays.begin(), delays.end());
  SpikeSignal s{delays, draw_amplitudes(K, amp, rng)};
  s.validate();
  return s;
}

CMat ProblemInstance::lifted_truth() const {
  if (!truth) throw std::domain_error("ProblemInstance: no ground truth stored");
  const CVec x = synth_spike_spectrum(truth->spikes, indexing);
  return x * truth->h.transpose();
}

void ProblemInstance::validate() const {
  if (y.size() != subspace.rows())
    throw std::domain_error("ProblemInstance: y length != subspace rows");
  if (y.size() != indexing.size())
    throw std::domain_error("ProblemInstance: y length != indexing size");
  if (epsilon < 0.0) throw std::domain_error("ProblemInstance: negative noise level");
  if (truth) {
    const CVec g = synth_psf(subspace, truth->h);
    const CVec x = synth_spike_spectrum(truth->spikes, indexing);
    CVec w = y - g.cwiseProduct(x);
    if (truth->w.size() > 0) w -= truth->w;
    if (w.cwiseAbs().maxCoeff() > 1e-9 * (1.0 + y.cwiseAbs().maxCoeff()))
      throw std::domain_error("ProblemInstance: y inconsistent with stored ground truth");
  }
}

}  // namespace atomiclift
