#include "atomiclift/signal_model.hpp"

#include <doctest.h>

#include <cmath>

using namespace atomiclift;

namespace {

SpikeSignal random_spikes(int K, std::uint64_t seed) {
  Rng rng(seed);
  RVec d(K);
  CVec a(K);
  for (int k = 0; k < K; ++k) {
    d(k) = rng.uniform();
    a(k) = Complex(rng.normal(), rng.normal());
  }
  return SpikeSignal{d, a};
}

}  // namespace

TEST_CASE("steering vector closed forms") {
  const auto shifted5 = IndexingConvention::shifted(5);
  const CVec c0 = steering_vector(0.0, shifted5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(c0(i) - Complex(1.0 / std::sqrt(5.0), 0.0)) < 1e-15);

  const auto sym5 = IndexingConvention::symmetric_n(5);
  const CVec chalf = steering_vector(0.5, sym5);
  const Real s = 1.0 / std::sqrt(5.0);
  const Real expected[] = {s, -s, s, -s, s};  // e^{-j pi n}, n = -2..2
  for (int i = 0; i < 5; ++i) {
    CHECK(chalf(i).real() == doctest::Approx(expected[i]).epsilon(1e-14));
    CHECK(std::abs(chalf(i).imag()) < 1e-14);
  }
}

TEST_CASE("steering vector is unit norm and self-consistent") {
  const auto idx = IndexingConvention::shifted(17);
  Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    const Real tau = rng.uniform();
    const CVec c = steering_vector(tau, idx);
    CHECK(std::abs(c.norm() - 1.0) < 1e-14);
    CHECK(std::abs(c.dot(c) - Complex(1.0, 0.0)) < 1e-13);  // inner-product oracle
  }
  CHECK_THROWS_AS(steering_vector(1.0, idx), std::domain_error);
  CHECK_THROWS_AS(steering_vector(-0.1, idx), std::domain_error);
}

TEST_CASE("spike spectrum closed forms and oracle") {
  const auto sym5 = IndexingConvention::symmetric_n(5);

  SpikeSignal one{RVec::Zero(1), CVec::Ones(1)};
  const CVec x1 = synth_spike_spectrum(one, sym5);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(x1(i) - Complex(1, 0)) < 1e-14);

  RVec d2(2);
  d2 << 0.0, 0.5;
  SpikeSignal two{d2, CVec::Ones(2)};
  const CVec x2 = synth_spike_spectrum(two, sym5);
  for (int i = 0; i < 5; ++i) {
    const int n = sym5.index(i);
    CHECK(std::abs(x2(i) - Complex(1.0 + (n % 2 == 0 ? 1.0 : -1.0), 0.0)) < 1e-13);
  }

  // brute-force per-entry oracle
  const auto idx = IndexingConvention::shifted(33);
  const SpikeSignal s = random_spikes(3, 11);
  const CVec x = synth_spike_spectrum(s, idx);
  for (int i = 0; i < 33; ++i) {
    Complex acc(0, 0);
    for (int k = 0; k < 3; ++k)
      acc += s.amplitudes(k) * std::exp(Complex(0, -kTwoPi * idx.index(i) * s.delays(k)));
    CHECK(std::abs(x(i) - acc) <= 1e-12 * std::max(1.0, std::abs(acc)));
  }
}

TEST_CASE("spectrum is linear in the spike set") {
  const auto idx = IndexingConvention::shifted(21);
  const SpikeSignal a = random_spikes(2, 3);
  const SpikeSignal b = random_spikes(3, 4);
  RVec d(5);
  CVec amp(5);
  d << a.delays(0), a.delays(1), b.delays(0), b.delays(1), b.delays(2);
  amp << a.amplitudes(0), a.amplitudes(1), b.amplitudes(0), b.amplitudes(1), b.amplitudes(2);
  const CVec sum = synth_spike_spectrum(SpikeSignal{d, amp}, idx);
  const CVec parts = synth_spike_spectrum(a, idx) + synth_spike_spectrum(b, idx);
  CHECK((sum - parts).norm() < 1e-12);
}

TEST_CASE("shifted spectrum equals symmetric spectrum times per-spike phase") {
  const int M = 4, N = 4 * M + 1;
  const auto sym = IndexingConvention::symmetric_n(N);
  const auto shf = IndexingConvention::shifted(N);
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const Real tau = rng.uniform();
    SpikeSignal s{RVec::Constant(1, tau), CVec::Ones(1)};
    const CVec xs = synth_spike_spectrum(s, sym);
    const CVec xf = synth_spike_spectrum(s, shf);
    const Complex phase = std::exp(Complex(0, -kTwoPi * 2 * M * tau));
    CHECK((xf - phase * xs).norm() < 1e-12 * xs.norm());
  }
}

TEST_CASE("atomic amplitudes scale by sqrt(N)") {
  const SpikeSignal s = random_spikes(4, 9);
  const CVec a = s.atomic_amplitudes(64);
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(a(k) / s.amplitudes(k) - std::sqrt(64.0)) < 1e-14);
}

TEST_CASE("fourier-row subspace: unit modulus, mu = 1, near-isotropy") {
  const SubspaceModel one_col = sample_subspace(SubspaceKind::FourierRow, 16, 1, 42);
  CHECK((one_col.matrix().array() - Complex(1, 0)).matrix().norm() == 0.0);

  const int N = 64, L = 3;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(L, L);
  int rows = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SubspaceModel sub = sample_subspace(SubspaceKind::FourierRow, N, L, seed);
    CHECK(sub.coherence() == 1.0);
    CHECK((sub.matrix().cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    for (int n = 0; n < N; ++n) {
      const CVec b = sub.row(n);
      acc += b * b.adjoint();
      ++rows;
    }
  }
  acc /= static_cast<Real>(rows);
  CHECK((acc - CMat::Identity(L, L)).norm() < 0.05);  // Monte Carlo isotropy
}

TEST_CASE("gaussian subspaces: empirical isotropy and flagged coherence") {
  const int L = 3;
  for (const auto kind : {SubspaceKind::ComplexGaussian, SubspaceKind::RealGaussian}) {
    CMat acc = CMat::Zero(L, L);
    int rows = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const SubspaceModel sub = sample_subspace(kind, 1000, L, 1000 + seed);
      CHECK(sub.coherence_is_empirical());
      for (int n = 0; n < sub.rows(); ++n) {
        acc += sub.row(n) * sub.row(n).adjoint();
        ++rows;
      }
    }
    acc /= static_cast<Real>(rows);
    CHECK((acc - CMat::Identity(L, L)).norm() < 0.05);
  }
}

TEST_CASE("subspace sampling is deterministic given the seed") {
  const SubspaceModel a = sample_subspace(SubspaceKind::ComplexGaussian, 32, 4, 77);
  const SubspaceModel b = sample_subspace(SubspaceKind::ComplexGaussian, 32, 4, 77);
  CHECK((a.matrix() - b.matrix()).norm() == 0.0);
}

TEST_CASE("synth_psf matches a per-row inner product oracle") {
  const SubspaceModel sub = sample_subspace(SubspaceKind::ComplexGaussian, 24, 3, 8);
  CHECK((synth_psf(sub, CVec::Zero(3))).norm() == 0.0);

  Rng rng(13);
  CVec h(3);
  for (int i = 0; i < 3; ++i) h(i) = rng.complex_normal();
  const CVec g = synth_psf(sub, h);
  for (int n = 0; n < 24; ++n) {
    Complex acc(0, 0);
    for (int i = 0; i < 3; ++i) acc += sub.matrix()(n, i) * h(i);
    CHECK(std::abs(g(n) - acc) < 1e-14 * std::max(1.0, std::abs(acc)));
  }
  CHECK_THROWS_AS(synth_psf(sub, CVec::Zero(5)), std::domain_error);
}

TEST_CASE("measure combines entrywise") {
  Rng rng(21);
  CVec g(6), x(6), w(6);
  for (int i = 0; i < 6; ++i) {
    g(i) = rng.complex_normal();
    x(i) = rng.complex_normal();
    w(i) = rng.complex_normal();
  }
  CHECK((measure(CVec::Ones(6), x) - x).norm() == 0.0);
  CHECK((measure(g, CVec::Zero(6), w) - w).norm() == 0.0);
  const CVec y = measure(g, x, w);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(y(i) - (g(i) * x(i) + w(i))) < 1e-15);
  CHECK_THROWS_AS(measure(g, CVec::Zero(5)), std::domain_error);
}

TEST_CASE("min separation wraps around the circle") {
  RVec d(2);
  d << 0.1, 0.95;
  CHECK(min_separation(d) == doctest::Approx(0.15).epsilon(1e-12));
  d << 0.0, 0.5;
  CHECK(min_separation(d) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::isinf(min_separation(RVec::Zero(1))));

  Rng rng(31);
  RVec r(10);
  for (int i = 0; i < 10; ++i) r(i) = rng.uniform();
  Real brute = 1.0;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      const Real diff = std::abs(r(i) - r(j));
      brute = std::min(brute, std::min(diff, 1.0 - diff));
    }
  CHECK(min_separation(r) == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("separated spike draws respect the separation floor") {
  const AmplitudeSpec amp{10.0};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const SpikeSignal s = draw_separated_spikes(6, 1.0 / 64, amp, seed);
    CHECK(min_separation(s.delays) >= 1.0 / 64);
  }
  CHECK_THROWS_AS(draw_separated_spikes(10, 0.2, amp, 1), std::invalid_argument);
  const SpikeSignal single = draw_separated_spikes(1, 0.5, amp, 3);
  CHECK(single.count() == 1);
}

TEST_CASE("amplitude law spans at most the configured dynamic range") {
  const AmplitudeSpec amp{10.0};
  const Real limit = std::pow(10.0, 10.0 / 20.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SpikeSignal s = draw_separated_spikes(5, 0.01, amp, seed);
    const RVec mags = s.amplitudes.cwiseAbs();
    CHECK(mags.maxCoeff() / mags.minCoeff() <= limit * (1 + 1e-12));
    CHECK(mags.minCoeff() >= 1.0 - 1e-12);
  }
}

TEST_CASE("draws are deterministic given the seed") {
  const AmplitudeSpec amp{10.0};
  const SpikeSignal a = draw_separated_spikes(4, 0.01, amp, 99);
  const SpikeSignal b = draw_separated_spikes(4, 0.01, amp, 99);
  CHECK((a.delays - b.delays).norm() == 0.0);
  CHECK((a.amplitudes - b.amplitudes).norm() == 0.0);
}

TEST_CASE("problem instance consistency check") {
  const auto idx = IndexingConvention::shifted(16);
  const SubspaceModel sub = sample_subspace(SubspaceKind::FourierRow, 16, 2, 5);
  const SpikeSignal s = draw_separated_spikes(2, 0.1, AmplitudeSpec{}, 6);
  CVec h(2);
  h << Complex(1, 0), Complex(0, 1);
  const CVec y = measure(synth_psf(sub, h), synth_spike_spectrum(s, idx));
  ProblemInstance good{y, sub, 0.0, idx, GroundTruth{s, h, CVec()}};
  CHECK_NOTHROW(good.validate());

  ProblemInstance bad{2.0 * y, sub, 0.0, idx, GroundTruth{s, h, CVec()}};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}
