#include "atomiclift/certificate.hpp"

#include "atomiclift/lifting.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace atomiclift {

namespace {

void require_symmetric_subspace(const FejerTable& table, const SubspaceModel& subspace) {
  if (subspace.rows() != table.size())
    throw std::domain_error("certificate: subspace rows must equal 4M+1");
}

// (-j2pi n)^m
Complex deriv_factor(int n, int m) {
  Complex f(1.0, 0.0);
  const Complex d(0.0, -kTwoPi * n);
  for (int j = 0; j < m; ++j) f *= d;
  return f;
}

CVec nu_vector(const FejerTable& table, const RVec& support, int n) {
  const int K = static_cast<int>(support.size());
  CVec nu(2 * K);
  const Complex jk(0.0, kTwoPi * n * table.kappa);
  for (int k = 0; k < K; ++k) {
    const Complex e = std::polar(1.0, -kTwoPi * support(k) * n);
    nu(k) = e;
    nu(K + k) = jk * e;
  }
  return nu;
}

}  // namespace

FejerTable fejer_coeffs(int M) {
  if (M < 1) throw std::domain_error("fejer_coeffs: M must be >= 1");
  FejerTable t;
  t.M = M;
  t.s = RVec::Zero(4 * M + 1);
  for (int n = -2 * M; n <= 2 * M; ++n) {
    const int lo = std::max(n - M, -M);
    const int hi = std::min(n + M, M);
    Real acc = 0.0;
    for (int i = lo; i <= hi; ++i)
      acc += (1.0 - std::abs(i) / static_cast<Real>(M)) *
             (1.0 - std::abs(n - i) / static_cast<Real>(M));
    t.s(n + 2 * M) = acc / M;
  }
  Real sum_n2 = 0.0;
  for (int n = -2 * M; n <= 2 * M; ++n) sum_n2 += t.coeff(n) * n * n;
  t.kpp0 = -(kTwoPi * kTwoPi) * sum_n2 / M;
  t.kappa = 1.0 / std::sqrt(std::abs(t.kpp0));
  return t;
}

Complex kernel_eval(const FejerTable& table, int m, Real tau) {
  if (m < 0 || m > 3) throw std::domain_error("kernel_eval: m must be in 0..3");
  Complex acc(0.0, 0.0);
  for (int n = -2 * table.M; n <= 2 * table.M; ++n)
    acc += table.coeff(n) * deriv_factor(n, m) * std::polar(1.0, -kTwoPi * tau * n);
  return acc / static_cast<Real>(table.M);
}

CMat matrix_kernel_eval(const FejerTable& table, const SubspaceModel& subspace, int m,
                        Real tau) {
  if (m < 0 || m > 3) throw std::domain_error("matrix_kernel_eval: m must be in 0..3");
  require_symmetric_subspace(table, subspace);
  const int L = subspace.cols();
  CMat A = CMat::Zero(L, L);
  for (int n = -2 * table.M; n <= 2 * table.M; ++n) {
    const Complex w = table.coeff(n) * deriv_factor(n, m) * std::polar(1.0, -kTwoPi * tau * n);
    const CVec b = subspace.row(n + 2 * table.M);
    A.noalias() += w * (b * b.adjoint());
  }
  return A / static_cast<Real>(table.M);
}

CMat build_phi(const FejerTable& table, const RVec& support) {
  const int K = static_cast<int>(support.size());
  const Real kap = table.kappa;
  CMat phi(2 * K, 2 * K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const Real d = support(i) - support(j);
      phi(i, j) = kernel_eval(table, 0, d);
      phi(i, K + j) = kap * kernel_eval(table, 1, d);
      phi(K + i, j) = -kap * kernel_eval(table, 1, d);
      phi(K + i, K + j) = -kap * kap * kernel_eval(table, 2, d);
    }
  }
  return phi;
}

CMat build_phi_outer(const FejerTable& table, const RVec& support) {
  const int K = static_cast<int>(support.size());
  CMat phi = CMat::Zero(2 * K, 2 * K);
  for (int n = -2 * table.M; n <= 2 * table.M; ++n) {
    const CVec nu = nu_vector(table, support, n);
    phi.noalias() += (table.coeff(n) / table.M) * (nu * nu.adjoint());
  }
  return phi;
}

CMat build_gamma(const FejerTable& table, const SubspaceModel& subspace, const RVec& support) {
  require_symmetric_subspace(table, subspace);
  const int K = static_cast<int>(support.size());
  const int L = subspace.cols();
  const Real kap = table.kappa;
  CMat gamma(2 * K * L, 2 * K * L);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      const Real d = support(i) - support(j);
      const CMat k0 = matrix_kernel_eval(table, subspace, 0, d);
      const CMat k1 = matrix_kernel_eval(table, subspace, 1, d);
      const CMat k2 = matrix_kernel_eval(table, subspace, 2, d);
      gamma.block(i * L, j * L, L, L) = k0;
      gamma.block(i * L, (K + j) * L, L, L) = kap * k1;
      gamma.block((K + i) * L, j * L, L, L) = -kap * k1;
      gamma.block((K + i) * L, (K + j) * L, L, L) = -kap * kap * k2;
    }
  }
  return gamma;
}

CMat build_gamma_outer(const FejerTable& table, const SubspaceModel& subspace,
                       const RVec& support) {
  require_symmetric_subspace(table, subspace);
  const int K = static_cast<int>(support.size());
  const int L = subspace.cols();
  CMat gamma = CMat::Zero(2 * K * L, 2 * K * L);
  CVec w(2 * K * L);
  for (int n = -2 * table.M; n <= 2 * table.M; ++n) {
    const CVec nu = nu_vector(table, support, n);
    const CVec b = subspace.row(n + 2 * table.M);
    for (int r = 0; r < 2 * K; ++r) w.segment(r * L, L) = nu(r) * b;
    gamma.noalias() += (table.coeff(n) / table.M) * (w * w.adjoint());
  }
  return gamma;
}

CoefficientSolution solve_coefficients(const CMat& gamma, const CVec& signs, const CVec& h,
                                       Real kappa) {
  const int L = static_cast<int>(h.size());
  const int K = static_cast<int>(signs.size());
  if (gamma.rows() != 2 * K * L || gamma.cols() != 2 * K * L)
    throw std::domain_error("solve_coefficients: Gamma size mismatch");

  CoefficientSolution sol;

  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (gamma + gamma.adjoint()),
                                         Eigen::EigenvaluesOnly);
  const Real lmin = es.eigenvalues().minCoeff();
  const Real lmax = es.eigenvalues().maxCoeff();
  sol.condition = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<Real>::infinity();
  if (!(sol.condition < 1e10)) return sol;  // certificate failure, reported not thrown

  CVec rhs = CVec::Zero(2 * K * L);
  for (int k = 0; k < K; ++k) rhs.segment(k * L, L) = signs(k) * h.conjugate();

  const CVec v = gamma.ldlt().solve(rhs);
  sol.solve_residual = (gamma * v - rhs).norm() / rhs.norm();

  sol.alpha.resize(L, K);
  sol.beta.resize(L, K);
  for (int k = 0; k < K; ++k) {
    sol.alpha.col(k) = v.segment(k * L, L);
    sol.beta.col(k) = kappa * v.segment((K + k) * L, L);  // system solves kappa^{-1} beta
  }
  sol.ok = true;
  return sol;
}

CertificateWorkspace build_certificate(const FejerTable& table, const SubspaceModel& subspace,
                                       const RVec& support, const CVec& signs, const CVec& h) {
  require_symmetric_subspace(table, subspace);
  if (signs.size() != support.size())
    throw std::domain_error("build_certificate: signs/support length mismatch");
  if (h.size() != subspace.cols())
    throw std::domain_error("build_certificate: h length != subspace dimension");
  const Real hnorm = h.norm();
  if (hnorm == 0.0) throw std::domain_error("build_certificate: h must be nonzero");

  CertificateWorkspace ws{table, subspace, support, signs, h / hnorm, hnorm, CMat(), {}, CVec()};
  for (int k = 0; k < signs.size(); ++k) {
    const Real mag = std::abs(signs(k));
    if (std::abs(mag - 1.0) > 1e-9)
      throw std::domain_error("build_certificate: signs must have unit modulus");
  }

  ws.gamma = build_gamma(table, subspace, support);
  ws.coeffs = solve_coefficients(ws.gamma, ws.signs, ws.h, table.kappa);
  if (!ws.coeffs.ok) return ws;

  // Implied dual vector: Q(t) = (1/sqrt(N)) sum_n e^{-j2pi t n} conj(q_n) b_n with
  // conj(q_n) = (sqrt(N) s_n / M) b_n^H sum_k e^{j2pi tau_k n} (alpha_k - j2pi n beta_k).
  const int N = table.size();
  const int K = static_cast<int>(support.size());
  const Real rootN = std::sqrt(static_cast<Real>(N));
  ws.implied_q.resize(N);
  for (int n = -2 * table.M; n <= 2 * table.M; ++n) {
    CVec v = CVec::Zero(subspace.cols());
    const Complex jn(0.0, -kTwoPi * n);
    for (int k = 0; k < K; ++k)
      v += std::polar(1.0, kTwoPi * support(k) * n) *
           (ws.coeffs.alpha.col(k) + jn * ws.coeffs.beta.col(k));
    const CVec b = subspace.row(n + 2 * table.M);
    const Complex qconj = (rootN * table.coeff(n) / table.M) * b.dot(v);  // b^H v
    ws.implied_q(n + 2 * table.M) = std::conj(qconj);
  }
  return ws;
}

CVec certificate_eval(const CertificateWorkspace& ws, int m, Real tau) {
  if (m < 0 || m > 2) throw std::domain_error("certificate_eval: m must be in 0..2");
  if (!ws.coeffs.ok) throw std::domain_error("certificate_eval: coefficients not solved");
  const int K = static_cast<int>(ws.support.size());
  CVec q = CVec::Zero(ws.subspace.cols());
  for (int k = 0; k < K; ++k) {
    const Real d = tau - ws.support(k);
    q += matrix_kernel_eval(ws.table, ws.subspace, m, d) * ws.coeffs.alpha.col(k);
    q += matrix_kernel_eval(ws.table, ws.subspace, m + 1, d) * ws.coeffs.beta.col(k);
  }
  return q;
}

namespace {

// Fast evaluation path through the implied dual vector: Q^(m) = D^H c^(m)(tau).
struct FastEvaluator {
  CMat D;  // X*(q), N x L
  IndexingConvention indexing;

  explicit FastEvaluator(const CertificateWorkspace& ws)
      : D(lift_adjoint(ws.implied_q, ws.subspace)),
        indexing(IndexingConvention::symmetric(ws.table.M)) {}

  CVec eval(Real tau, int m) const {
    Real t = tau - std::floor(tau);
    if (t >= 1.0) t = 0.0;
    return D.adjoint() * steering_vector_deriv(t, indexing, m);
  }

  Real norm(Real tau) const { return eval(tau, 0).norm(); }

  // Newton ascent on ||Q||^2 from tau0; stays within +-trust of tau0.
  Real refine_peak(Real tau0, Real trust, int steps) const {
    Real t = tau0;
    for (int it = 0; it < steps; ++it) {
      const CVec q0 = eval(t, 0);
      const CVec q1 = eval(t, 1);
      const CVec q2 = eval(t, 2);
      const Real d1 = 2.0 * q0.dot(q1).real();
      const Real d2 = 2.0 * (q1.squaredNorm() + q0.dot(q2).real());
      if (d2 >= 0.0) break;  // not locally concave, keep grid point
      Real step = -d1 / d2;
      step = std::clamp(step, -trust, trust);
      const Real tn = t + step;
      if (std::abs(step) < 1e-13) {
        t = tn;
        break;
      }
      if (std::abs(tn - tau0) > trust) break;
      t = tn;
    }
    return t;
  }
};

Real wrap_dist_to_support(Real tau, const RVec& support) {
  Real d = std::numeric_limits<Real>::infinity();
  for (int k = 0; k < support.size(); ++k) d = std::min(d, wrap_distance(tau, support(k)));
  return d;
}

}  // namespace

ValidationReport validate_certificate(const CertificateWorkspace& ws,
                                      const ValidationOptions& opts) {
  ValidationReport rep;
  rep.solved = ws.coeffs.ok;
  rep.gamma_condition = ws.coeffs.condition;
  rep.solve_residual = ws.coeffs.solve_residual;
  if (!rep.solved) return rep;  // failure (e.g. violated separation) is a reportable outcome

  const FastEvaluator ev(ws);
  const int K = static_cast<int>(ws.support.size());
  const Real near_radius = opts.rho_c / ws.table.M;

  // Interpolation conditions, verified pointwise rather than assumed.
  for (int k = 0; k < K; ++k) {
    const CVec q0 = ev.eval(ws.support(k), 0);
    const CVec q1 = ev.eval(ws.support(k), 1);
    const CVec target = ws.signs(k) * ws.h.conjugate();
    rep.interp_value_residual = std::max(rep.interp_value_residual, (q0 - target).norm());
    rep.interp_deriv_residual =
        std::max(rep.interp_deriv_residual, ws.table.kappa * q1.norm());
  }

  const int G = opts.grid_size;
  const Real dg = 1.0 / G;
  std::vector<Real> values(G);
  for (int g = 0; g < G; ++g) values[g] = ev.norm(g * dg);

  rep.grid_all_below_one = true;
  rep.off_support_max = 0.0;
  rep.far_region_max = 0.0;
  constexpr Real kOnSupportEps = 1e-9;

  for (int g = 0; g < G; ++g) {
    const Real tau = g * dg;
    const Real dist = wrap_dist_to_support(tau, ws.support);
    if (dist < kOnSupportEps) continue;
    if (values[g] >= 1.0) rep.grid_all_below_one = false;
    rep.off_support_max = std::max(rep.off_support_max, values[g]);
    if (dist >= near_radius) rep.far_region_max = std::max(rep.far_region_max, values[g]);
  }

  // Newton-refined local maxima of the circular grid.
  constexpr Real kPeakExclusion = 1e-6;
  for (int g = 0; g < G; ++g) {
    const Real prev = values[(g + G - 1) % G];
    const Real next = values[(g + 1) % G];
    if (values[g] < prev || values[g] < next) continue;
    const Real t = ev.refine_peak(g * dg, 2.0 * dg, opts.newton_steps);
    const Real v = ev.norm(t);
    const Real dist = wrap_dist_to_support(t, ws.support);
    if (dist < kPeakExclusion) continue;  // the interpolation peak itself
    if (v >= 1.0) rep.grid_all_below_one = false;
    rep.off_support_max = std::max(rep.off_support_max, v);
    if (dist >= near_radius) rep.far_region_max = std::max(rep.far_region_max, v);
  }

  // Near-region quadratic decay: least-squares fit of 1 - ||Q|| against
  // M^2 (tau - tau_i)^2 over each T_i.
  rep.fitted_cb = RVec::Zero(K);
  const Real M2 = static_cast<Real>(ws.table.M) * ws.table.M;
  for (int k = 0; k < K; ++k) {
    Real num = 0.0, den = 0.0;
    for (int s = 1; s <= opts.near_points / 2; ++s) {
      const Real off = near_radius * s / (opts.near_points / 2);
      for (const Real sgn : {-1.0, 1.0}) {
        const Real tau = ws.support(k) + sgn * off;
        const Real x = M2 * off * off;
        const Real y = 1.0 - ev.norm(tau);
        num += x * y;
        den += x * x;
        rep.off_support_max = std::max(rep.off_support_max, ev.norm(tau));
        if (ev.norm(tau) >= 1.0) rep.grid_all_below_one = false;
      }
    }
    rep.fitted_cb(k) = den > 0.0 ? num / den : 0.0;
  }
  rep.min_fitted_cb = rep.fitted_cb.minCoeff();

  rep.off_support_margin = 1.0 - rep.off_support_max;
  rep.pass = rep.grid_all_below_one && rep.off_support_max < 1.0 &&
             rep.interp_value_residual < opts.interp_tol &&
             rep.interp_deriv_residual < opts.interp_tol;
  return rep;
}

GammaConcentrationStats gamma_concentration_stats(const FejerTable& table, SubspaceKind kind,
                                                  const RVec& support, int L, int trials,
                                                  std::uint64_t master_seed) {
  if (trials < 1) throw std::invalid_argument("gamma_concentration_stats: trials >= 1");
  const int K = static_cast<int>(support.size());
  const CMat phi = build_phi(table, support);

  // Phi (x) I_L
  CMat phi_kron = CMat::Zero(2 * K * L, 2 * K * L);
  for (int r = 0; r < 2 * K; ++r)
    for (int c = 0; c < 2 * K; ++c)
      phi_kron.block(r * L, c * L, L, L) = phi(r, c) * CMat::Identity(L, L);

  GammaConcentrationStats stats;
  stats.deviations = RVec::Zero(trials);
  for (int t = 0; t < trials; ++t) {
    const SubspaceModel sub = sample_subspace(kind, table.size(), L, derive_seed(master_seed, t));
    const CMat gamma = build_gamma_outer(table, sub, support);
    stats.deviations(t) = hermitian_spectral_norm(gamma - phi_kron);
  }
  std::vector<Real> sorted(stats.deviations.begin(), stats.deviations.end());
  std::sort(sorted.begin(), sorted.end());
  stats.mean = stats.deviations.mean();
  stats.max = sorted.back();
  auto nearest_rank = [&](Real q) {
    const int idx = std::min<int>(trials - 1, static_cast<int>(std::ceil(q * trials)) - 1);
    return sorted[std::max(idx, 0)];
  };
  stats.quantile50 = nearest_rank(0.50);
  stats.quantile95 = nearest_rank(0.95);
  return stats;
}

Real hermitian_spectral_norm(const CMat& A) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (A + A.adjoint()), Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
}

}  // namespace atomiclift
