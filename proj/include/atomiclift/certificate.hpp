// certificate.hpp - numerical construction and validation of the
// vector-valued dual certificate built from the squared Fejer kernel.
//
// Ingredients, all on the symmetric index set n = -2M..2M (N = 4M+1):
//
//   s_n      = (1/M) sum_i (1-|i|/M)(1-|n-i|/M)        (kernel coefficients)
//   K^(m)(t) = (1/M) sum_n s_n (-j2pi n)^m e^{-j2pi t n}
//   Km(t)    = (1/M) sum_n s_n (-j2pi n)^m (b_n b_n^H) e^{-j2pi t n}
//   kappa    = 1/sqrt(|K''(0)|)
//   nu_n     = [e^{-j2pi tau_k n}]_k ++ [(j2pi n kappa) e^{-j2pi tau_k n}]_k
//   Phi      = (1/M) sum_n s_n nu_n nu_n^H                       (2K x 2K)
//   Gamma    = (1/M) sum_n s_n (nu_n (x) b_n)(nu_n (x) b_n)^H    (2LK x 2LK)
//
// The certificate Q(t) = sum_k Km0(t-tau_k) alpha_k + Km1(t-tau_k) beta_k
// interpolates Q(tau_k) = sign_k conj(h), Q'(tau_k) = 0; validity further
// requires ||Q(t)||_2 < 1 off the support. The lab both constructs Q and
// falsifies it when its assumptions (separation, subspace draw) are broken.

#pragma once

#include "atomiclift/signal_model.hpp"
#include "atomiclift/types.hpp"

#include <cstdint>
#include <vector>

namespace atomiclift {

inline constexpr Real kNearRegionRadiusFactor = 0.08245;  // rho_c

struct FejerTable {
  int M = 0;
  RVec s;       // s_n for n = -2M..2M, s(i) holds n = i - 2M
  Real kappa;   // 1/sqrt(|K''(0)|)
  Real kpp0;    // K''(0) (negative)

  int size() const { return 4 * M + 1; }
  Real coeff(int n) const { return s(n + 2 * M); }
};

FejerTable fejer_coeffs(int M);

// K^(m)(tau), m in {0,1,2,3}.
Complex kernel_eval(const FejerTable& table, int m, Real tau);

// Matrix-valued kernel Km(tau) in C^{L x L}; requires the subspace to have
// N = 4M+1 rows (symmetric indexing).
CMat matrix_kernel_eval(const FejerTable& table, const SubspaceModel& subspace, int m,
                        Real tau);

// Phi via the kernel-block assembly and via the nu-outer-product sum.
CMat build_phi(const FejerTable& table, const RVec& support);
CMat build_phi_outer(const FejerTable& table, const RVec& support);

// Gamma via matrix-kernel blocks and via the Kronecker outer-product sum.
CMat build_gamma(const FejerTable& table, const SubspaceModel& subspace, const RVec& support);
CMat build_gamma_outer(const FejerTable& table, const SubspaceModel& subspace,
                       const RVec& support);

struct CoefficientSolution {
  bool ok = false;
  CMat alpha;           // L x K, column k = alpha_k
  CMat beta;            // L x K, column k = beta_k (kappa scaling resolved)
  Real solve_residual = 0.0;   // ||Gamma v - rhs|| / ||rhs||
  Real condition = 0.0;        // cond_2(Gamma)
};

// Solves the interpolation system for given unit-modulus signs and unit h.
// Ill-conditioned Gamma (cond > 1e10) is reported with ok = false.
CoefficientSolution solve_coefficients(const CMat& gamma, const CVec& signs, const CVec& h,
                                       Real kappa);

struct CertificateWorkspace {
  FejerTable table;
  SubspaceModel subspace;
  RVec support;
  CVec signs;     // sign(a_k^*), unit modulus
  CVec h;         // normalized to unit norm
  Real h_scale;   // recorded ||h|| of the input
  CMat gamma;
  CoefficientSolution coeffs;
  CVec implied_q;  // q with Q(t) = (X*(q))^H c(t); empty when !coeffs.ok
};

CertificateWorkspace build_certificate(const FejerTable& table, const SubspaceModel& subspace,
                                       const RVec& support, const CVec& signs, const CVec& h);

// Q^(m)(tau) by direct kernel summation, m in {0,1,2}.
CVec certificate_eval(const CertificateWorkspace& ws, int m, Real tau);

struct ValidationOptions {
  int grid_size = 1 << 16;
  int near_points = 64;     // extra samples per near region
  int newton_steps = 8;
  Real rho_c = kNearRegionRadiusFactor;
  Real interp_tol = 1e-8;
};

struct ValidationReport {
  bool solved = false;
  Real solve_residual = 0.0;
  Real gamma_condition = 0.0;
  Real interp_value_residual = 0.0;  // max_k ||Q(tau_k) - sign_k conj(h)||
  Real interp_deriv_residual = 0.0;  // max_k kappa ||Q'(tau_k)||
  Real off_support_max = 0.0;        // sup ||Q|| away from the spikes
  Real far_region_max = 0.0;         // sup ||Q|| at distance >= rho_c/M from all spikes
  Real off_support_margin = 0.0;     // 1 - off_support_max
  RVec fitted_cb;                    // per-spike quadratic decay constants
  Real min_fitted_cb = 0.0;
  bool grid_all_below_one = false;
  bool pass = false;
};

ValidationReport validate_certificate(const CertificateWorkspace& ws,
                                      const ValidationOptions& opts = {});

struct GammaConcentrationStats {
  RVec deviations;  // ||Gamma - Phi (x) I_L|| per trial
  Real mean = 0.0;
  Real quantile50 = 0.0;
  Real quantile95 = 0.0;
  Real max = 0.0;
};

GammaConcentrationStats gamma_concentration_stats(const FejerTable& table, SubspaceKind kind,
                                                  const RVec& support, int L, int trials,
                                                  std::uint64_t master_seed);

// Spectral norm of a Hermitian matrix (max |eigenvalue|).
Real hermitian_spectral_norm(const CMat& A);

}  // namespace atomiclift
