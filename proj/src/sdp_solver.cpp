#include "atomiclift/sdp_solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

namespace atomiclift {

namespace {

CMat hermitize(const CMat& A) { return 0.5 * (A + A.adjoint()); }

// Projection onto the PSD cone via eigendecomposition, building the
// result from whichever spectral side has fewer eigenvalues.
void psd_project(const CMat& H, CMat& out, Eigen::SelfAdjointEigenSolver<CMat>& es) {
  es.compute(H);
  const RVec& d = es.eigenvalues();
  const CMat& V = es.eigenvectors();
  const int n = static_cast<int>(d.size());
  int first_pos = 0;
  while (first_pos < n && d(first_pos) <= 0.0) ++first_pos;
  const int npos = n - first_pos;
  if (npos == 0) {
    out.setZero(n, n);
  } else if (npos <= first_pos) {
    const auto Vp = V.rightCols(npos);
    out.noalias() = Vp * d.tail(npos).asDiagonal() * Vp.adjoint();
  } else {
    const auto Vn = V.leftCols(first_pos);
    out = H;
    out.noalias() -= Vn * d.head(first_pos).asDiagonal() * Vn.adjoint();
  }
}

enum class Mode { NormOnly, Equality, Ball };

// Consensus ADMM on {structured (u, W, Z)} <-> {PSD S} for the atomic-norm
// block SDP. All data enter pre-scaled so that rho = 1 is well matched.
class ConsensusAdmm {
 public:
  ConsensusAdmm(Mode mode, int N, int L, const SolverOptions& opts)
      : mode_(mode), N_(N), L_(L), opts_(opts), rho_(opts.rho_init) {
    const int n = N_ + L_;
    S_.setZero(n, n);
    U_.setZero(n, n);
    G_.setZero(n, n);
    u_.setZero(N_);
    W_.setZero(L_, L_);
    Z_.setZero(N_, L_);
  }

  void set_measurements(const CMat& B, const CVec& y, Real epsilon) {
    B_ = B;
    y_ = y;
    epsilon_ = epsilon;
    bn2_ = B.cwiseAbs2().rowwise().sum();
    for (int n = 0; n < N_; ++n)
      if (bn2_(n) <= 0.0)
        throw std::domain_error("solver: subspace has a zero row, measurement unreachable");
    // min-norm feasible start, row by row
    for (int n = 0; n < N_; ++n)
      Z_.row(n) = (y_(n) / bn2_(n)) * B_.row(n).conjugate();
  }

  void set_fixed_target(const CMat& Z0) { Z_ = Z0; }

  SolveDiagnostics run() {
    SolveDiagnostics diag;
    assemble();
    psd_project(G_, S_, es_);

    std::ofstream trace;
    if (opts_.trace) {
      trace.open(opts_.trace_path);
      trace << "iter,primal_res,dual_res,gap,rho\n";
    }

    CMat S_prev = S_;
    Real gap = std::numeric_limits<Real>::infinity();
    Real half_time_residual = std::numeric_limits<Real>::infinity();

    int it = 0;
    for (; it < opts_.max_iter; ++it) {
      update_structured();
      assemble();
      S_prev.swap(S_);
      psd_project(G_ + U_, S_, es_);
      U_ += G_ - S_;

      const Real gnorm = G_.norm();
      const Real snorm = S_.norm();
      const Real primal = (G_ - S_).norm() / std::max({1.0, gnorm, snorm});
      const Real dual = (S_ - S_prev).norm() / std::max(1.0 / rho_, U_.norm());
      diag.primal_residual = primal;
      diag.dual_residual = dual;

      const bool checkpoint = (it % opts_.check_interval) == 0 || it == opts_.max_iter - 1;
      if (primal < opts_.tol_primal && dual < opts_.tol_dual && checkpoint) {
        gap = relative_gap();
        diag.gap = gap;
        if (gap < opts_.tol_gap) {
          diag.converged = true;
          ++it;
          break;
        }
      }
      if (checkpoint) {
        if (opts_.trace)
          trace << it << ',' << primal << ',' << dual << ',' << gap << ',' << rho_ << '\n';
        if (opts_.adapt_rho && it > 0) adapt_rho(primal, dual);
        if (it == opts_.max_iter / 2) half_time_residual = primal;
      }
    }

    diag.iterations = it;
    if (diag.converged) {
      diag.status = "converged";
    } else {
      diag.gap = relative_gap();
      const bool stuck = diag.primal_residual > 1e3 * opts_.tol_primal &&
                         diag.primal_residual > 0.25 * half_time_residual;
      diag.status = stuck ? "plateau" : "max_iter";
    }
    assemble();
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(G_), Eigen::EigenvaluesOnly);
    diag.min_eigenvalue = es.eigenvalues().minCoeff();
    diag.constraint_residual = constraint_residual();
    return diag;
  }

  Real objective() const {
    return 0.5 * N_ * u_(0).real() + 0.5 * W_.trace().real();
  }

  // Dual-feasible direction from the consensus multiplier: X*(p) = 2 rho U12.
  CMat dual_matrix() const { return 2.0 * rho_ * U_.block(0, N_, N_, L_); }

  CVec dual_vector() const {
    const CMat D = dual_matrix();
    CVec p(N_);
    for (int n = 0; n < N_; ++n) p(n) = D.row(n).cwiseProduct(B_.row(n)).sum() / bn2_(n);
    return p;
  }

  const CVec& u() const { return u_; }
  const CMat& W() const { return W_; }
  const CMat& Z() const { return Z_; }

 private:
  void update_structured() {
    const CMat H = S_ - U_;
    const auto H11 = H.topLeftCorner(N_, N_);

    // Toeplitz block: per-diagonal averaging, with the trace term of the
    // objective entering only the main diagonal.
    u_(0) = Complex(H11.diagonal().real().mean() - 0.5 / rho_, 0.0);
    for (int k = 1; k < N_; ++k) {
      Complex acc(0.0, 0.0);
      for (int i = 0; i + k < N_; ++i) acc += H11(i + k, i) + std::conj(H11(i, i + k));
      u_(k) = acc / (2.0 * (N_ - k));
    }

    W_ = hermitize(H.bottomRightCorner(L_, L_));
    W_.diagonal().array() -= Complex(0.5 / rho_, 0.0);

    if (mode_ == Mode::NormOnly) return;  // Z is data

    CMat Z0 = 0.5 * (H.topRightCorner(N_, L_) + H.bottomLeftCorner(L_, N_).adjoint());
    if (mode_ == Mode::Equality) {
      for (int n = 0; n < N_; ++n) {
        const Complex c = Z0.row(n).cwiseProduct(B_.row(n)).sum();
        Z0.row(n) += ((y_(n) - c) / bn2_(n)) * B_.row(n).conjugate();
      }
    } else {
      project_ball(Z0);
    }
    Z_ = Z0;
  }

  // Frobenius projection onto {Z : ||y - X(Z)|| <= eps}. The constraint
  // touches each row through v_n = <row, conj(b_n)> only, reducing to a
  // weighted ball projection of the scalars v with weights 1/||b_n||^2.
  void project_ball(CMat& Z0) const {
    CVec c(N_);
    for (int n = 0; n < N_; ++n) c(n) = Z0.row(n).cwiseProduct(B_.row(n)).sum();
    const CVec r = y_ - c;
    const Real rn = r.norm();
    if (rn <= epsilon_) return;
    if (epsilon_ <= 0.0) {
      for (int n = 0; n < N_; ++n) Z0.row(n) += (r(n) / bn2_(n)) * B_.row(n).conjugate();
      return;
    }

    const RVec w = bn2_.cwiseInverse();
    const Real wmax = w.maxCoeff();
    Real lo = 0.0, hi = wmax * (rn / epsilon_ - 1.0) + 1e-30;
    auto phi = [&](Real lam) {
      Real acc = 0.0;
      for (int n = 0; n < N_; ++n) {
        const Real f = w(n) / (w(n) + lam);
        acc += f * f * std::norm(r(n));
      }
      return acc;
    };
    for (int i = 0; i < 80; ++i) {
      const Real mid = 0.5 * (lo + hi);
      (phi(mid) > epsilon_ * epsilon_ ? lo : hi) = mid;
    }
    const Real lam = 0.5 * (lo + hi);
    for (int n = 0; n < N_; ++n) {
      const Complex v = (w(n) * c(n) + lam * y_(n)) / (w(n) + lam);
      Z0.row(n) += ((v - c(n)) / bn2_(n)) * B_.row(n).conjugate();
    }
  }

  void assemble() {
    auto T = G_.topLeftCorner(N_, N_);
    for (int i = 0; i < N_; ++i) {
      T(i, i) = Complex(u_(0).real(), 0.0);
      for (int k = 1; i + k < N_; ++k) {
        T(i + k, i) = u_(k);
        T(i, i + k) = std::conj(u_(k));
      }
    }
    G_.topRightCorner(N_, L_) = Z_;
    G_.bottomLeftCorner(L_, N_) = Z_.adjoint();
    G_.bottomRightCorner(L_, L_) = W_;
  }

  void adapt_rho(Real primal, Real dual) {
    if (primal > 10.0 * dual && rho_ < 1e6) {
      rho_ *= 2.0;
      U_ *= 0.5;
    } else if (dual > 10.0 * primal && rho_ > 1e-6) {
      rho_ *= 0.5;
      U_ *= 2.0;
    }
  }

  Real constraint_residual() const {
    if (mode_ == Mode::NormOnly) return 0.0;
    CVec c(N_);
    for (int n = 0; n < N_; ++n) c(n) = Z_.row(n).cwiseProduct(B_.row(n)).sum();
    const Real rn = (y_ - c).norm();
    return mode_ == Mode::Equality ? rn : std::max(0.0, rn - epsilon_);
  }

  Real relative_gap() {
    const Real obj = objective();
    const CMat D = dual_matrix();
    Real dual_obj = 0.0;
    if (mode_ == Mode::NormOnly) {
      const Real dn = dual_atomic_norm(D, opts_).value;
      dual_obj = (D.conjugate().cwiseProduct(Z_).sum()).real() / std::max(1.0, dn);
    } else {
      const CVec p = dual_vector();
      CMat Y(N_, L_);
      for (int n = 0; n < N_; ++n) Y.row(n) = p(n) * B_.row(n).conjugate();
      const Real dn = std::max(1.0, dual_atomic_norm(Y, opts_).value);
      dual_obj = y_.dot(p).real() / dn;
      if (mode_ == Mode::Ball) dual_obj -= epsilon_ * p.norm() / dn;
    }
    last_dual_objective_ = dual_obj;
    return std::abs(obj - dual_obj) / (1.0 + std::abs(obj));
  }

 public:
  Real last_dual_objective() const { return last_dual_objective_; }

 private:
  Mode mode_;
  int N_, L_;
  SolverOptions opts_;
  Real rho_;
  Real epsilon_ = 0.0;
  CMat B_;
  CVec y_;
  RVec bn2_;
  CVec u_;
  CMat W_, Z_, S_, U_, G_;
  Real last_dual_objective_ = 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es_;
};

LiftedSolution solve_measured(const ProblemInstance& instance, Mode mode,
                              const SolverOptions& opts) {
  instance.validate();
  const int N = instance.n_samples();
  const int L = instance.subspace_dim();

  LiftedSolution sol;
  const Real scale = instance.y.norm();
  if (scale == 0.0) {
    sol.Z = CMat::Zero(N, L);
    sol.p = CVec::Zero(N);
    sol.block = SdpBlock{CVec::Zero(N), CMat::Zero(L, L), sol.Z};
    sol.diag.converged = true;
    sol.diag.status = "converged";
    return sol;
  }

  ConsensusAdmm admm(mode, N, L, opts);
  admm.set_measurements(instance.subspace.matrix(), instance.y / scale,
                        instance.epsilon / scale);
  sol.diag = admm.run();

  sol.Z = scale * admm.Z();
  sol.objective = scale * admm.objective();
  sol.p = admm.dual_vector();
  sol.block = SdpBlock{scale * admm.u(), scale * admm.W(), sol.Z};
  sol.diag.constraint_residual *= scale;
  sol.diag.min_eigenvalue *= scale;
  sol.dual_norm = dual_atomic_norm(lift_adjoint(sol.p, instance.subspace), opts).value;
  sol.dual_objective = instance.y.dot(sol.p).real();
  if (mode == Mode::Ball) sol.dual_objective -= instance.epsilon * sol.p.norm();
  return sol;
}

}  // namespace

CMat SdpBlock::toeplitz() const {
  const int N = static_cast<int>(u.size());
  CMat T(N, N);
  for (int i = 0; i < N; ++i) {
    T(i, i) = Complex(u(0).real(), 0.0);
    for (int k = 1; i + k < N; ++k) {
      T(i + k, i) = u(k);
      T(i, i + k) = std::conj(u(k));
    }
  }
  return T;
}

CMat SdpBlock::assemble() const {
  const int N = static_cast<int>(Z.rows());
  const int L = static_cast<int>(Z.cols());
  CMat G(N + L, N + L);
  G.topLeftCorner(N, N) = toeplitz();
  G.topRightCorner(N, L) = Z;
  G.bottomLeftCorner(L, N) = Z.adjoint();
  G.bottomRightCorner(L, L) = W;
  return G;
}

DualNormResult dual_atomic_norm(const CMat& Y, const SolverOptions& opts) {
  const int N = static_cast<int>(Y.rows());
  DualNormResult res;
  if (Y.size() == 0 || Y.norm() == 0.0) return res;

  // f(tau) = ||Y^H c(tau)||^2 = (1/N) sum_k r_k e^{-j2pi k tau}, with r_k the
  // k-th diagonal sum of R = Y Y^H; degree N-1 in e^{-j2pi tau}.
  const CMat R = Y * Y.adjoint();
  CVec r = CVec::Zero(2 * N - 1);  // index k + (N-1), k = j - i
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(j - i + N - 1) += R(i, j);

  auto poly = [&](Real tau, int deriv) {
    Complex acc(0.0, 0.0);
    for (int k = -(N - 1); k <= N - 1; ++k) {
      Complex term = r(k + N - 1) * std::polar(1.0, -kTwoPi * k * tau);
      for (int d = 0; d < deriv; ++d) term *= Complex(0.0, -kTwoPi * k);
      acc += term;
    }
    return acc / static_cast<Real>(N);
  };
  auto f = [&](Real tau) { return std::max(0.0, poly(tau, 0).real()); };

  const int G = std::max(opts.dual_grid_min, opts.dual_grid_per_n * N);
  std::vector<Real> vals(G);
  for (int g = 0; g < G; ++g) vals[g] = f(static_cast<Real>(g) / G);

  Real best_v = -1.0, best_t = 0.0;
  for (int g = 0; g < G; ++g) {
    const Real prev = vals[(g + G - 1) % G];
    const Real next = vals[(g + 1) % G];
    if (vals[g] < prev || vals[g] < next) continue;
    Real t = static_cast<Real>(g) / G;
    for (int step = 0; step < opts.dual_newton_steps; ++step) {
      const Real d1 = poly(t, 1).real();
      const Real d2 = poly(t, 2).real();
      if (d2 >= 0.0) break;
      Real delta = -d1 / d2;
      delta = std::clamp(delta, -1.0 / G, 1.0 / G);
      t += delta;
      if (std::abs(delta) < 1e-15) break;
    }
    const Real v = f(t);
    if (v > best_v) {
      best_v = v;
      best_t = t - std::floor(t);
    }
  }
  res.value = std::sqrt(best_v);
  res.argmax = best_t;
  return res;
}

AtomicNormResult atomic_norm_sdp(const CMat& Z, const SolverOptions& opts) {
  if (!Z.allFinite()) throw std::domain_error("atomic_norm: non-finite entries");
  const int N = static_cast<int>(Z.rows());
  const int L = static_cast<int>(Z.cols());

  AtomicNormResult res;
  const Real scale = Z.norm();
  if (scale == 0.0) {
    res.block = SdpBlock{CVec::Zero(N), CMat::Zero(L, L), Z};
    res.dual_matrix = CMat::Zero(N, L);
    res.diag.converged = true;
    res.diag.status = "converged";
    return res;
  }

  ConsensusAdmm admm(Mode::NormOnly, N, L, opts);
  admm.set_fixed_target(Z / scale);
  res.diag = admm.run();
  res.value = scale * admm.objective();
  res.block = SdpBlock{scale * admm.u(), scale * admm.W(), Z};
  res.dual_matrix = admm.dual_matrix();
  res.diag.min_eigenvalue *= scale;
  return res;
}

Real atomic_norm(const CMat& Z, const SolverOptions& opts) {
  AtomicNormResult res = atomic_norm_sdp(Z, opts);
  if (!res.diag.converged)
    throw SolverError("atomic_norm: ADMM did not converge (status " + res.diag.status + ")",
                      res.diag);
  return res.value;
}

LiftedSolution solve_noiseless(const ProblemInstance& instance, const SolverOptions& opts) {
  if (instance.epsilon != 0.0)
    throw std::domain_error("solve_noiseless: instance declares a positive noise level");
  return solve_measured(instance, Mode::Equality, opts);
}

LiftedSolution solve_noisy(const ProblemInstance& instance, const SolverOptions& opts) {
  if (instance.epsilon <= 0.0)
    throw std::domain_error("solve_noisy: requires a positive noise level");
  return solve_measured(instance, Mode::Ball, opts);
}

DualQuality extract_dual(const LiftedSolution& solution, const ProblemInstance& instance,
                         const SolverOptions& opts) {
  DualQuality q;
  q.p = solution.p;
  q.dual_norm = dual_atomic_norm(lift_adjoint(q.p, instance.subspace), opts).value;
  q.dual_objective = instance.y.dot(q.p).real();
  if (instance.epsilon > 0.0) q.dual_objective -= instance.epsilon * q.p.norm();
  q.gap = std::abs(q.dual_objective - solution.objective) /
          (1.0 + std::abs(solution.objective));
  q.warn = q.dual_norm > 1.0 + opts.tol_dual_feas || q.gap > opts.tol_gap * 10.0;
  return q;
}

DualDirectSolution solve_dual_direct(const ProblemInstance& instance,
                                     const SolverOptions& opts) {
  instance.validate();
  const int N = instance.n_samples();
  const int L = instance.subspace_dim();
  const CMat& B = instance.subspace.matrix();
  const RVec bn2 = B.cwiseAbs2().rowwise().sum();

  DualDirectSolution sol;
  const Real scale = instance.y.norm();
  if (scale == 0.0) {
    sol.p = CVec::Zero(N);
    sol.H = CMat::Identity(N, N);
    sol.diag.converged = true;
    sol.diag.status = "converged";
    return sol;
  }
  const CVec y = instance.y / scale;

  const int n = N + L;
  CMat H = CMat::Identity(N, N);
  CVec p = CVec::Zero(N);
  CMat S = CMat::Identity(n, n);
  CMat U = CMat::Zero(n, n);
  CMat G = CMat::Zero(n, n);
  G.bottomRightCorner(L, L).setIdentity();
  Real rho = opts.rho_init;
  Eigen::SelfAdjointEigenSolver<CMat> es;

  SolveDiagnostics diag;
  CMat S_prev = S;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    const CMat A = S - U;
    // H block: Hermitian with k-th diagonal sums pinned to N delta_{k0}
    H = hermitize(A.topLeftCorner(N, N));
    const Real dsum = H.diagonal().real().sum();
    H.diagonal().array() += Complex((N - dsum) / N, 0.0);
    for (int k = 1; k < N; ++k) {
      Complex acc(0.0, 0.0);
      for (int i = 0; i + k < N; ++i) acc += H(i, i + k);
      const Complex corr = -acc / static_cast<Real>(N - k);
      for (int i = 0; i + k < N; ++i) {
        H(i, i + k) += corr;
        H(i + k, i) = std::conj(H(i, i + k));
      }
    }
    // p block
    const CMat A12 = 0.5 * (A.topRightCorner(N, L) + A.bottomLeftCorner(L, N).adjoint());
    for (int row = 0; row < N; ++row) {
      const Complex c = A12.row(row).cwiseProduct(B.row(row)).sum();
      p(row) = (c + y(row) / (2.0 * rho)) / bn2(row);
    }

    G.topLeftCorner(N, N) = H;
    for (int row = 0; row < N; ++row) G.row(row).segment(N, L) = p(row) * B.row(row).conjugate();
    G.bottomLeftCorner(L, N) = G.topRightCorner(N, L).adjoint();

    S_prev.swap(S);
    psd_project(G + U, S, es);
    U += G - S;

    const Real primal = (G - S).norm() / std::max({1.0, G.norm(), S.norm()});
    const Real dual = (S - S_prev).norm() / std::max(1.0 / rho, U.norm());
    diag.primal_residual = primal;
    diag.dual_residual = dual;
    if (primal < opts.tol_primal && dual < opts.tol_dual) {
      diag.converged = true;
      ++it;
      break;
    }
    if (opts.adapt_rho && it > 0 && it % opts.check_interval == 0) {
      if (primal > 10.0 * dual && rho < 1e6) {
        rho *= 2.0;
        U *= 0.5;
      } else if (dual > 10.0 * primal && rho > 1e-6) {
        rho *= 0.5;
        U *= 2.0;
      }
    }
  }
  diag.iterations = it;
  diag.status = diag.converged ? "converged" : "max_iter";
  Eigen::SelfAdjointEigenSolver<CMat> esg(hermitize(G), Eigen::EigenvaluesOnly);
  diag.min_eigenvalue = esg.eigenvalues().minCoeff();

  sol.p = p;
  sol.H = H;
  sol.objective = instance.y.dot(p).real();
  sol.diag = diag;
  return sol;
}

}  // namespace atomiclift
