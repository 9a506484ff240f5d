// sdp_solver.hpp - atomic norm computation and the lifted recovery
// programs via their semidefinite characterization
//
//   ||Z||_A = min  (1/2) tr(toep(u)) + (1/2) tr(W)
//            s.t.  [[toep(u), Z], [Z^H, W]] >= 0,
//
// solved by ADMM on the consensus splitting {structured (u, W, Z)} <->
// {PSD cone variable S}. The structure projections are all closed form:
// diagonal averaging for the Toeplitz block, and a row-separable affine
// (noiseless) or weighted-ball (noisy) projection for the measurement
// constraint, since X touches each row of Z exactly once.
//
// The dual vector of the measurement constraint is recovered from the
// consensus multiplier: at convergence the off-diagonal block satisfies
// X*(p) = 2 rho U12, which pins p row by row. A direct dual-SDP solve
// (bounded-real-lemma form) is provided as an independent cross-check.

#pragma once

#include "atomiclift/lifting.hpp"
#include "atomiclift/signal_model.hpp"
#include "atomiclift/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace atomiclift {

struct SolverOptions {
  Real rho_init = 1.0;
  bool adapt_rho = true;          // residual balancing, factor-2 steps
  Real tol_primal = 1e-7;         // relative consensus residual
  Real tol_dual = 1e-7;           // relative dual residual
  Real tol_gap = 1e-6;            // relative duality gap
  Real tol_feas = 1e-8;           // measurement feasibility (noiseless)
  Real tol_psd = 1e-7;            // minimum-eigenvalue slack
  Real tol_dual_feas = 1e-4;      // dual norm of X*(p) may exceed 1 by this
  int max_iter = 50000;
  int check_interval = 50;        // cadence of gap checks and rho adaptation
  int dual_grid_min = 4096;       // dual-norm grid floor
  int dual_grid_per_n = 32;       // and per-sample density
  int dual_newton_steps = 3;
  bool trace = false;
  std::string trace_path = "admm_trace.csv";
};

// Structured SDP variables; the block matrix is [[toep(u), Z], [Z^H, W]].
struct SdpBlock {
  CVec u;   // first Toeplitz column, u(0) real
  CMat W;   // L x L Hermitian
  CMat Z;   // N x L

  CMat toeplitz() const;
  CMat assemble() const;
};

struct SolveDiagnostics {
  int iterations = 0;
  bool converged = false;
  Real primal_residual = 0.0;
  Real dual_residual = 0.0;
  Real gap = 0.0;
  Real constraint_residual = 0.0;  // ||X(Z) - y|| (or ball excess, noisy)
  Real min_eigenvalue = 0.0;       // of the assembled block at exit
  std::string status;              // converged | max_iter | plateau
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveDiagnostics diag)
      : std::runtime_error(what), diagnostics(std::move(diag)) {}
  SolveDiagnostics diagnostics;
};

struct AtomicNormResult {
  Real value = 0.0;
  SdpBlock block;
  CMat dual_matrix;  // dual-feasible direction Y (up to normalization)
  SolveDiagnostics diag;
};

struct LiftedSolution {
  CMat Z;
  Real objective = 0.0;      // atomic-norm estimate of Z
  CVec p;                    // dual vector of the data constraint
  Real dual_objective = 0.0;
  Real dual_norm = 0.0;      // ||X*(p)||_A^* at exit
  SdpBlock block;
  SolveDiagnostics diag;
};

struct DualNormResult {
  Real value = 0.0;
  Real argmax = 0.0;
};

// ||Y||_A^* = sup_tau ||Y^H c(tau)||_2. The objective is a nonnegative
// trigonometric polynomial of degree N-1 in tau, so a grid of density
// >= dual_grid_per_n per sample plus Newton polishing brackets the
// supremum to well below the solver tolerances (Bernstein: the derivative
// is bounded by 2 pi (N-1) max f, so the grid error is O((N/G)^2)).
DualNormResult dual_atomic_norm(const CMat& Y, const SolverOptions& opts = {});

AtomicNormResult atomic_norm_sdp(const CMat& Z, const SolverOptions& opts = {});

// Convenience wrapper; throws SolverError when the ADMM hits the
// iteration cap before reaching tolerance.
Real atomic_norm(const CMat& Z, const SolverOptions& opts = {});

LiftedSolution solve_noiseless(const ProblemInstance& instance, const SolverOptions& opts = {});
LiftedSolution solve_noisy(const ProblemInstance& instance, const SolverOptions& opts = {});

struct DualQuality {
  CVec p;
  Real dual_norm = 0.0;   // ||X*(p)||_A^*
  Real dual_objective = 0.0;
  Real gap = 0.0;         // |<p,y>_R - objective| / (1 + objective)
  bool warn = false;      // dual infeasible beyond tolerance
};

// Validates the extracted multiplier of a converged solve against the
// instance: dual feasibility and gap closure. Localization may proceed
// on a warned dual; the flag is attached to downstream reports.
DualQuality extract_dual(const LiftedSolution& solution, const ProblemInstance& instance,
                         const SolverOptions& opts = {});

struct DualDirectSolution {
  CVec p;
  CMat H;  // Hermitian witness with diagonal sums N delta_{k0}
  Real objective = 0.0;
  SolveDiagnostics diag;
};

// Direct solve of  max <p,y>_R  s.t. [[H, X*(p)], [X*(p)^H, I_L]] >= 0,
// sum of k-th diagonal of H = N delta_{k0}  (the bounded-real-lemma form
// of the dual constraint); independent cross-check of the multiplier path.
DualDirectSolution solve_dual_direct(const ProblemInstance& instance,
                                     const SolverOptions& opts = {});

}  // namespace atomiclift
