#include "atomiclift/sdp_solver.hpp"

#include "atomiclift/certificate.hpp"

#include <doctest.h>

#include <cmath>

using namespace atomiclift;

namespace {

CMat random_cmat(int r, int c, std::uint64_t seed) {
  Rng rng(seed);
  CMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.complex_normal();
  return m;
}

CVec unit_cvec(int n, std::uint64_t seed) {
  Rng rng(seed);
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

ProblemInstance exact_instance(int N, int L, int K, std::uint64_t seed,
                               SubspaceKind kind = SubspaceKind::FourierRow) {
  const auto idx = IndexingConvention::shifted(N);
  const SubspaceModel sub = sample_subspace(kind, N, L, derive_seed(seed, 2));
  const SpikeSignal spikes = draw_separated_spikes(K, 1.0 / N, AmplitudeSpec{}, derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 3));
  CVec h(L);
  for (int i = 0; i < L; ++i) h(i) = rng.complex_normal();
  const CVec y = measure(synth_psf(sub, h), synth_spike_spectrum(spikes, idx));
  return ProblemInstance{y, sub, 0.0, idx, GroundTruth{spikes, h, CVec()}};
}

}  // namespace

TEST_CASE("dual atomic norm: zero and single atom") {
  CHECK(dual_atomic_norm(CMat::Zero(9, 2)).value == 0.0);

  const auto idx = IndexingConvention::shifted(17);
  const Real tau0 = 0.3721;
  const CVec u = unit_cvec(2, 5);
  const CMat Y = steering_vector(tau0, idx) * (2.5 * u).adjoint();
  const auto res = dual_atomic_norm(Y);
  CHECK(res.value == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(wrap_distance(res.argmax, tau0) < 1e-7);
}

TEST_CASE("dual atomic norm matches a fine-grid oracle") {
  const CMat Y = random_cmat(17, 2, 9);
  const auto res = dual_atomic_norm(Y);

  const auto idx = IndexingConvention::shifted(17);
  Real best = 0.0;
  const int G = 1 << 20;
  for (int g = 0; g < G; ++g) {
    const Real tau = static_cast<Real>(g) / G;
    best = std::max(best, (Y.adjoint() * steering_vector(tau, idx)).norm());
  }
  CHECK(res.value == doctest::Approx(best).epsilon(1e-6));
  CHECK(res.value >= best - 1e-9);  // grid value never exceeds the refined sup
}

TEST_CASE("atomic norm: zero matrix and single atom") {
  SUBCASE("zero") { CHECK(atomic_norm(CMat::Zero(9, 3)) == 0.0); }
  SUBCASE("atom") {
    const auto idx = IndexingConvention::shifted(17);
    const CMat Z = steering_vector(0.2345, idx) * unit_cvec(2, 3).adjoint();
    CHECK(atomic_norm(Z) == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("atomic norm of two well-separated atoms is 2") {
  // oracle: the scalar dual certificate for {0.2, 0.7} certifies the
  // two-atom decomposition, so the norm equals the coefficient sum
  const int M = 8, N = 33;
  const FejerTable table = fejer_coeffs(M);
  const SubspaceModel ones(CMat::Ones(N, 1), SubspaceKind::Explicit);
  RVec support(2);
  support << 0.2, 0.7;
  const auto ws = build_certificate(table, ones, support, CVec::Ones(2), CVec::Ones(1));
  REQUIRE(ws.coeffs.ok);
  ValidationOptions vopts;
  vopts.grid_size = 1 << 13;
  REQUIRE(validate_certificate(ws, vopts).pass);

  const auto idx = IndexingConvention::symmetric(M);
  const CVec u = unit_cvec(2, 11);
  const CMat Z = (steering_vector(0.2, idx) + steering_vector(0.7, idx)) * u.adjoint();
  CHECK(atomic_norm(Z) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("atomic norm scaling and triangle inequality") {
  SolverOptions opts;
  Rng rng(15);
  for (int trial = 0; trial < 5; ++trial) {
    const int N = 9 + 4 * trial;
    const CMat Z1 = random_cmat(N, 2, 50 + trial);
    const CMat Z2 = random_cmat(N, 2, 60 + trial);
    const Real c = 0.5 + 2.0 * rng.uniform();
    const Real n1 = atomic_norm(Z1, opts);
    const Real n2 = atomic_norm(Z2, opts);
    CHECK(atomic_norm(c * Z1, opts) == doctest::Approx(c * n1).epsilon(1e-6));
    CHECK(atomic_norm(Z1 + Z2, opts) <= n1 + n2 + 1e-6 * (n1 + n2));
    CHECK(n1 >= 0.0);
  }
}

TEST_CASE("block matrix at the solution is numerically PSD") {
  const CMat Z = random_cmat(13, 2, 70);
  const auto res = atomic_norm_sdp(Z);
  REQUIRE(res.diag.converged);
  const CMat G = res.block.assemble();
  CHECK(res.diag.min_eigenvalue >= -1e-7 * (1.0 + G.trace().real()));
  // duality sandwich: any dual-feasible Y lower-bounds the norm
  const Real dn = dual_atomic_norm(res.dual_matrix).value;
  const Real lower = (res.dual_matrix.conjugate().cwiseProduct(Z).sum()).real() / std::max(1.0, dn);
  CHECK(lower <= res.value + 1e-6 * (1.0 + res.value));
  CHECK(res.value - lower <= 1e-4 * (1.0 + res.value));
}

TEST_CASE("noiseless solve: y = 0 returns zero") {
  const SubspaceModel sub = sample_subspace(SubspaceKind::FourierRow, 9, 2, 80);
  ProblemInstance inst{CVec::Zero(9), sub, 0.0, IndexingConvention::shifted(9), std::nullopt};
  const auto sol = solve_noiseless(inst);
  CHECK(sol.Z.norm() == 0.0);
  CHECK(sol.objective == 0.0);
  CHECK(sol.diag.converged);
}

TEST_CASE("noiseless solve recovers a small lifted instance exactly") {
  const ProblemInstance inst = exact_instance(17, 2, 2, 123);
  const auto sol = solve_noiseless(inst);
  REQUIRE(sol.diag.converged);
  const CMat Zstar = inst.lifted_truth();
  CHECK((sol.Z - Zstar).norm() / Zstar.norm() < 1e-3);
  CHECK(sol.diag.constraint_residual <= 1e-8 * inst.y.norm());
  CHECK(sol.dual_norm <= 1.0 + 1e-4);
  // strong duality against the extracted multiplier
  const auto dq = extract_dual(sol, inst);
  CHECK(dq.gap < 1e-4);
  CHECK_FALSE(dq.warn);
}

TEST_CASE("L=1 all-ones subspace pins Z entrywise") {
  const int N = 11;
  const SubspaceModel ones(CMat::Ones(N, 1), SubspaceKind::Explicit);
  const CVec y = random_cmat(N, 1, 90).col(0);
  ProblemInstance inst{y, ones, 0.0, IndexingConvention::shifted(N), std::nullopt};
  const auto sol = solve_noiseless(inst);
  CHECK((sol.Z.col(0) - y).norm() < 1e-8 * y.norm());
}

TEST_CASE("noisy solve: eps >= ||y|| admits the zero solution") {
  const SubspaceModel sub = sample_subspace(SubspaceKind::FourierRow, 9, 2, 91);
  const CVec y = random_cmat(9, 1, 92).col(0);
  ProblemInstance inst{y, sub, 1.1 * y.norm(), IndexingConvention::shifted(9), std::nullopt};
  const auto sol = solve_noisy(inst);
  REQUIRE(sol.diag.converged);
  CHECK(sol.objective < 1e-6 * y.norm());
  CHECK(sol.Z.norm() < 1e-4 * y.norm());
}

TEST_CASE("noisy solve with tiny eps matches the noiseless solution") {
  const ProblemInstance clean = exact_instance(17, 2, 2, 321);
  ProblemInstance noisy = clean;
  noisy.epsilon = 1e-8 * clean.y.norm();
  noisy.truth.reset();  // epsilon no longer matches the stored w = 0
  const auto a = solve_noiseless(clean);
  const auto b = solve_noisy(noisy);
  REQUIRE(a.diag.converged);
  REQUIRE(b.diag.converged);
  CHECK((a.Z - b.Z).norm() <= 1e-6 * (1.0 + a.Z.norm()));
}

TEST_CASE("dual norm is positively homogeneous in the multiplier") {
  const SubspaceModel sub = sample_subspace(SubspaceKind::FourierRow, 13, 2, 93);
  const CVec p = random_cmat(13, 1, 94).col(0);
  const Real n1 = dual_atomic_norm(lift_adjoint(p, sub)).value;
  const Real n2 = dual_atomic_norm(lift_adjoint(2.0 * p, sub)).value;
  CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-10));
}

TEST_CASE("direct dual SDP agrees with the multiplier route") {
  const ProblemInstance inst = exact_instance(17, 2, 2, 555);
  const auto primal = solve_noiseless(inst);
  REQUIRE(primal.diag.converged);
  const auto direct = solve_dual_direct(inst);
  REQUIRE(direct.diag.converged);

  // same objective and dual-feasible polynomial
  CHECK(direct.objective == doctest::Approx(primal.objective).epsilon(1e-3));
  CHECK(dual_atomic_norm(lift_adjoint(direct.p, inst.subspace)).value <= 1.0 + 1e-3);

  // dual polynomials agree in sup norm on a grid
  const auto idx = inst.indexing;
  Real sup_diff = 0.0;
  const CMat Da = lift_adjoint(primal.p, inst.subspace);
  const CMat Db = lift_adjoint(direct.p, inst.subspace);
  for (int g = 0; g < 2048; ++g) {
    const CVec c = steering_vector(static_cast<Real>(g) / 2048, idx);
    sup_diff = std::max(sup_diff, ((Da - Db).adjoint() * c).norm());
  }
  CHECK(sup_diff < 1e-3);
}
