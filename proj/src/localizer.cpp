#include "atomiclift/localizer.hpp"

#include "atomiclift/lifting.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomiclift {

namespace {

// Evaluates Q and derivatives through the adjoint matrix D = X*(p).
struct PolyEvaluator {
  CMat D;
  IndexingConvention indexing;

  PolyEvaluator(const CVec& p, const SubspaceModel& subspace, const IndexingConvention& idx)
      : D(lift_adjoint(p, subspace)), indexing(idx) {}

  CVec eval(Real tau, int m) const {
    Real t = tau - std::floor(tau);
    if (t >= 1.0) t = 0.0;
    return D.adjoint() * steering_vector_deriv(t, indexing, m);
  }

  Real norm(Real tau) const { return eval(tau, 0).norm(); }

  Real refine_peak(Real tau0, Real trust, int steps) const {
    Real t = tau0;
    for (int it = 0; it < steps; ++it) {
      const CVec q0 = eval(t, 0);
      const CVec q1 = eval(t, 1);
      const CVec q2 = eval(t, 2);
      const Real d1 = 2.0 * q0.dot(q1).real();
      const Real d2 = 2.0 * (q1.squaredNorm() + q0.dot(q2).real());
      if (d2 >= 0.0) break;
      Real step = std::clamp(-d1 / d2, -trust, trust);
      t += step;
      if (std::abs(t - tau0) > trust) {
        t = tau0;
        break;
      }
      if (std::abs(step) < 1e-12) break;
    }
    return t - std::floor(t);
  }
};

// Min-cost assignment (Hungarian with potentials); cost is n x m, n <= m.
std::vector<int> hungarian_assign(const RMat& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const Real kInf = std::numeric_limits<Real>::infinity();
  std::vector<Real> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      Real delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const Real cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

CVec dual_polynomial_eval(const CVec& p, const SubspaceModel& subspace,
                          const IndexingConvention& indexing, Real tau, int deriv) {
  if (deriv < 0 || deriv > 2)
    throw std::domain_error("dual_polynomial_eval: derivative order must be 0..2");
  return PolyEvaluator(p, subspace, indexing).eval(tau, deriv);
}

RVec dual_polynomial_norms(const CVec& p, const SubspaceModel& subspace,
                           const IndexingConvention& indexing, const RVec& taus) {
  const PolyEvaluator ev(p, subspace, indexing);
  RVec out(taus.size());
  for (Eigen::Index i = 0; i < taus.size(); ++i) out(i) = ev.norm(taus(i));
  return out;
}

PeakSet localize_peaks(const CVec& p, const SubspaceModel& subspace,
                       const IndexingConvention& indexing, const LocalizeOptions& opts) {
  const int N = indexing.size();
  const PolyEvaluator ev(p, subspace, indexing);
  const int G = std::max(opts.min_grid, opts.grid_per_n * N);
  const Real dg = 1.0 / G;

  RVec vals(G);
  for (int g = 0; g < G; ++g) vals(g) = ev.norm(g * dg);

  PeakSet peaks;
  peaks.dual_infeasible_warning = vals.maxCoeff() > 1.0 + opts.dual_feas_warn;

  // Newton-refined local maxima above the unit-level threshold.
  std::vector<Real> cand_tau, cand_val;
  const Real threshold = 1.0 - opts.peak_tol;
  for (int g = 0; g < G; ++g) {
    const Real prev = vals((g + G - 1) % G);
    const Real next = vals((g + 1) % G);
    if (vals(g) < prev || vals(g) < next) continue;
    const Real t = ev.refine_peak(g * dg, 2.0 * dg, opts.newton_steps);
    const Real v = ev.norm(t);
    if (v >= threshold) {
      cand_tau.push_back(t);
      cand_val.push_back(v);
    }
  }
  if (cand_tau.empty()) {
    peaks.empty_result = true;
    return peaks;
  }

  // Merge candidates closer than the cluster radius into their
  // norm-weighted circular centroid.
  std::vector<int> order(cand_tau.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return cand_tau[a] < cand_tau[b]; });

  const Real cluster_radius = opts.cluster_radius_n / N;
  std::vector<char> taken(cand_tau.size(), 0);
  for (std::size_t s = 0; s < order.size(); ++s) {
    const int i = order[s];
    if (taken[i]) continue;
    Real wsum = cand_val[i];
    Real offset_sum = 0.0;
    Real best_val = cand_val[i];
    const Real anchor = cand_tau[i];
    taken[i] = 1;
    for (std::size_t t = 0; t < order.size(); ++t) {
      const int j = order[t];
      if (taken[j] || wrap_distance(anchor, cand_tau[j]) > cluster_radius) continue;
      taken[j] = 1;
      Real off = cand_tau[j] - anchor;
      off -= std::round(off);
      offset_sum += cand_val[j] * off;
      wsum += cand_val[j];
      best_val = std::max(best_val, cand_val[j]);
    }
    Real tau = anchor + offset_sum / wsum;
    tau -= std::floor(tau);
    peaks.delays.push_back(tau);
    peaks.peak_norms.push_back(best_val);
  }

  std::vector<int> idx(peaks.delays.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return peaks.delays[a] < peaks.delays[b]; });
  PeakSet sorted;
  sorted.empty_result = false;
  sorted.dual_infeasible_warning = peaks.dual_infeasible_warning;
  for (int i : idx) {
    sorted.delays.push_back(peaks.delays[i]);
    sorted.peak_norms.push_back(peaks.peak_norms[i]);
  }
  return sorted;
}

Rank1Factors factorize_rank1(const CMat& Z) {
  const Real zn = Z.norm();
  if (!(zn > 0.0) || Z.size() == 0)
    throw std::domain_error("factorize_rank1: degenerate (near-zero) input");
  Eigen::JacobiSVD<CMat> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  if (!(sv(0) > 0.0)) throw std::domain_error("factorize_rank1: degenerate (near-zero) input");

  Rank1Factors f;
  f.x = sv(0) * svd.matrixU().col(0);
  f.h = svd.matrixV().col(0).conjugate();  // Z ~= x h^T with h = conj(v1)
  f.residual = sv.size() > 1 ? sv(1) / sv(0) : 0.0;

  // Gauge: dominant entry of h real positive; the phase moves into x.
  int imax = 0;
  f.h.cwiseAbs().maxCoeff(&imax);
  const Complex phase = std::polar(1.0, std::arg(f.h(imax)));
  f.h /= phase;
  f.x *= phase;
  return f;
}

AmplitudeFit recover_amplitudes(const CVec& x, const IndexingConvention& indexing,
                                const std::vector<Real>& delays) {
  const int K = static_cast<int>(delays.size());
  const int N = indexing.size();
  if (K == 0) throw std::domain_error("recover_amplitudes: no delays given");
  if (K > N) throw std::domain_error("recover_amplitudes: more delays than samples");
  const Real rootN = std::sqrt(static_cast<Real>(N));

  CMat V(N, K);
  for (int k = 0; k < K; ++k) V.col(k) = rootN * steering_vector(delays[k], indexing);

  Eigen::JacobiSVD<CMat> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  AmplitudeFit fit;
  const RVec& sv = svd.singularValues();
  fit.condition = sv(sv.size() - 1) > 0.0
                      ? sv(0) / sv(sv.size() - 1)
                      : std::numeric_limits<Real>::infinity();
  fit.ill_conditioned = !(fit.condition < 1e8);
  fit.amplitudes = svd.solve(x);
  const Real xn = x.norm();
  fit.residual = xn > 0.0 ? (V * fit.amplitudes - x).norm() / xn : 0.0;
  return fit;
}

MatchReport match_spikes(const SpikeSignal& truth, const LocalizationResult& estimate,
                         Real radius) {
  if (!(radius > 0.0)) throw std::domain_error("match_spikes: radius must be positive");
  const int Kt = truth.count();
  const int Ke = static_cast<int>(estimate.delays.size());
  MatchReport rep;
  if (Kt == 0 || Ke == 0) {
    for (int i = 0; i < Kt; ++i) rep.missed.push_back(i);
    for (int j = 0; j < Ke; ++j) rep.false_alarms.push_back(j);
    return rep;
  }

  // Forbidden pairs carry a cost large enough that the minimum-cost
  // assignment always prefers any all-feasible alternative.
  const Real kBig = 1e6;
  const bool transposed = Kt > Ke;
  const int n = transposed ? Ke : Kt;
  const int m = transposed ? Kt : Ke;
  RMat cost(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const Real dt = transposed ? wrap_distance(estimate.delays[i], truth.delays(j))
                                 : wrap_distance(truth.delays(i), estimate.delays[j]);
      cost(i, j) = dt <= radius ? dt : kBig;
    }

  const std::vector<int> assign = hungarian_assign(cost);
  std::vector<char> truth_used(Kt, 0), est_used(Ke, 0);
  for (int i = 0; i < n; ++i) {
    const int j = assign[i];
    if (j < 0 || cost(i, j) >= kBig) continue;
    const int ti = transposed ? j : i;
    const int ej = transposed ? i : j;
    rep.matches.push_back({ti, ej, cost(i, j), 0.0});
    truth_used[ti] = 1;
    est_used[ej] = 1;
  }
  for (int i = 0; i < Kt; ++i)
    if (!truth_used[i]) rep.missed.push_back(i);
  for (int j = 0; j < Ke; ++j)
    if (!est_used[j]) rep.false_alarms.push_back(j);

  // Global complex scale over the matched pairs (least-squares alignment
  // of the estimated amplitudes to the true ones).
  if (!rep.matches.empty() && estimate.amplitudes.size() == Ke) {
    Complex num(0.0, 0.0);
    Real den = 0.0;
    for (const auto& mt : rep.matches) {
      num += std::conj(estimate.amplitudes(mt.estimate_index)) * truth.amplitudes(mt.truth_index);
      den += std::norm(estimate.amplitudes(mt.estimate_index));
    }
    rep.beta = den > 0.0 ? num / den : Complex(1.0, 0.0);
    for (auto& mt : rep.matches) {
      mt.amplitude_error =
          std::abs(truth.amplitudes(mt.truth_index) - rep.beta * estimate.amplitudes(mt.estimate_index));
      rep.max_amplitude_error = std::max(rep.max_amplitude_error, mt.amplitude_error);
    }
  }
  for (const auto& mt : rep.matches)
    rep.max_delay_error = std::max(rep.max_delay_error, mt.delay_error);
  return rep;
}

Real normalized_error(const CMat& Z_hat, const CMat& Z_star) {
  const Real denom = Z_star.norm();
  if (!(denom > 0.0)) throw std::domain_error("normalized_error: Z_star must be nonzero");
  return (Z_hat - Z_star).norm() / denom;
}

}  // namespace atomiclift
