#include "atomiclift/serialization.hpp"

#include <doctest.h>

using namespace atomiclift;

TEST_CASE("complex numbers serialize as [re, im]") {
  const Complex z(1.25, -3.5);
  const Json j = to_json(z);
  CHECK(j.dump() == "[1.25,-3.5]");
  CHECK(complex_from_json(j) == z);
  CHECK_THROWS_AS(complex_from_json(Json{{"re", 1.0}}), std::invalid_argument);
}

TEST_CASE("spike signals round trip") {
  const SpikeSignal s = draw_separated_spikes(4, 0.05, AmplitudeSpec{}, 7);
  const SpikeSignal back = spike_signal_from_json(to_json(s));
  CHECK((back.delays - s.delays).norm() == 0.0);
  CHECK((back.amplitudes - s.amplitudes).norm() == 0.0);
}

TEST_CASE("subspace models round trip with row-major matrices") {
  const SubspaceModel sub = sample_subspace(SubspaceKind::ComplexGaussian, 8, 3, 11);
  const Json j = to_json(sub);
  CHECK(j.at("kind") == "complex-gaussian");
  CHECK(j.at("matrix").size() == 8);      // rows
  CHECK(j.at("matrix")[0].size() == 3);   // row-major: each row holds L entries
  const SubspaceModel back = subspace_from_json(j);
  CHECK((back.matrix() - sub.matrix()).norm() == 0.0);
  CHECK(back.kind() == sub.kind());
}

TEST_CASE("subspace kind names are stable") {
  for (const auto kind : {SubspaceKind::FourierRow, SubspaceKind::ComplexGaussian,
                          SubspaceKind::RealGaussian, SubspaceKind::Explicit})
    CHECK(subspace_kind_from_name(subspace_kind_name(kind)) == kind);
  CHECK_THROWS_AS(subspace_kind_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("problem instances round trip including ground truth") {
  const auto idx = IndexingConvention::shifted(12);
  const SubspaceModel sub = sample_subspace(SubspaceKind::FourierRow, 12, 2, 13);
  const SpikeSignal s = draw_separated_spikes(2, 0.1, AmplitudeSpec{}, 14);
  CVec h(2);
  h << Complex(0.5, 0.5), Complex(-1, 2);
  const CVec y = measure(synth_psf(sub, h), synth_spike_spectrum(s, idx));
  const ProblemInstance inst{y, sub, 0.0, idx, GroundTruth{s, h, CVec::Zero(12)}};

  const ProblemInstance back = instance_from_json(to_json(inst));
  CHECK((back.y - inst.y).norm() == 0.0);
  CHECK(back.epsilon == 0.0);
  CHECK(back.indexing == inst.indexing);
  REQUIRE(back.truth.has_value());
  CHECK((back.truth->h - h).norm() == 0.0);
}
