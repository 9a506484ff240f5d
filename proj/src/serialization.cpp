#include "atomiclift/serialization.hpp"

namespace atomiclift {

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex_from_json: expected [re, im]");
  return Complex(j[0].get<Real>(), j[1].get<Real>());
}

Json to_json(const CVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
  return a;
}

CVec cvec_from_json(const Json& j) {
  CVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json to_json(const RVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

RVec rvec_from_json(const Json& j) {
  RVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<Real>();
  return v;
}

Json to_json(const CMat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

CMat cmat_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return CMat(0, 0);
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[r].size()) != cols)
      throw std::invalid_argument("cmat_from_json: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

Json to_json(const SpikeSignal& s) {
  return Json{{"delays", to_json(s.delays)}, {"amplitudes", to_json(s.amplitudes)}};
}

SpikeSignal spike_signal_from_json(const Json& j) {
  SpikeSignal s{rvec_from_json(j.at("delays")), cvec_from_json(j.at("amplitudes"))};
  s.validate();
  return s;
}

std::string subspace_kind_name(SubspaceKind kind) {
  switch (kind) {
    case SubspaceKind::FourierRow: return "fourier-row";
    case SubspaceKind::ComplexGaussian: return "complex-gaussian";
    case SubspaceKind::RealGaussian: return "real-gaussian";
    case SubspaceKind::Explicit: return "explicit";
  }
  return "explicit";
}

SubspaceKind subspace_kind_from_name(const std::string& name) {
  if (name == "fourier-row") return SubspaceKind::FourierRow;
  if (name == "complex-gaussian") return SubspaceKind::ComplexGaussian;
  if (name == "real-gaussian") return SubspaceKind::RealGaussian;
  if (name == "explicit") return SubspaceKind::Explicit;
  throw std::invalid_argument("unknown subspace kind: " + name);
}

Json to_json(const SubspaceModel& s) {
  return Json{{"kind", subspace_kind_name(s.kind())},
              {"N", s.rows()},
              {"L", s.cols()},
              {"matrix", to_json(s.matrix())},
              {"coherence", s.coherence()},
              {"coherence_is_empirical", s.coherence_is_empirical()}};
}

SubspaceModel subspace_from_json(const Json& j) {
  SubspaceModel s(cmat_from_json(j.at("matrix")), subspace_kind_from_name(j.at("kind")));
  if (j.contains("N") && j.at("N").get<int>() != s.rows())
    throw std::invalid_argument("subspace_from_json: N does not match matrix rows");
  if (j.contains("L") && j.at("L").get<int>() != s.cols())
    throw std::invalid_argument("subspace_from_json: L does not match matrix cols");
  return s;
}

Json to_json(const LocalizationResult& r) {
  return Json{{"delays", r.delays},
              {"peak_norms", r.peak_norms},
              {"amplitudes", to_json(r.amplitudes)},
              {"h", to_json(r.h)},
              {"beta", to_json(r.beta)},
              {"empty_result", r.empty_result},
              {"dual_infeasible_warning", r.dual_infeasible_warning},
              {"amplitude_ill_conditioned", r.amplitude_ill_conditioned}};
}

Json to_json(const ValidationReport& r) {
  return Json{{"solved", r.solved},
              {"solve_residual", r.solve_residual},
              {"gamma_condition", r.gamma_condition},
              {"interp_value_residual", r.interp_value_residual},
              {"interp_deriv_residual", r.interp_deriv_residual},
              {"off_support_max", r.off_support_max},
              {"far_region_max", r.far_region_max},
              {"off_support_margin", r.off_support_margin},
              {"fitted_cb", to_json(r.fitted_cb)},
              {"min_fitted_cb", r.min_fitted_cb},
              {"grid_all_below_one", r.grid_all_below_one},
              {"pass", r.pass}};
}

Json to_json(const ProblemInstance& instance) {
  Json j{{"y", to_json(instance.y)},
         {"subspace", to_json(instance.subspace)},
         {"epsilon", instance.epsilon},
         {"indexing",
          instance.indexing.kind() == IndexingConvention::Kind::Symmetric ? "symmetric"
                                                                          : "shifted"},
         {"N", instance.indexing.size()}};
  if (instance.truth) {
    j["truth"] = Json{{"spikes", to_json(instance.truth->spikes)},
                      {"h", to_json(instance.truth->h)},
                      {"w", to_json(instance.truth->w)}};
  }
  return j;
}

ProblemInstance instance_from_json(const Json& j) {
  const int N = j.at("N").get<int>();
  const std::string kind = j.at("indexing").get<std::string>();
  IndexingConvention indexing = kind == "symmetric" ? IndexingConvention::symmetric_n(N)
                                                    : IndexingConvention::shifted(N);
  ProblemInstance instance{cvec_from_json(j.at("y")), subspace_from_json(j.at("subspace")),
                           j.at("epsilon").get<Real>(), indexing, std::nullopt};
  if (j.contains("truth")) {
    const auto& t = j.at("truth");
    instance.truth = GroundTruth{spike_signal_from_json(t.at("spikes")),
                                 cvec_from_json(t.at("h")), cvec_from_json(t.at("w"))};
  }
  instance.validate();
  return instance;
}

}  // namespace atomiclift
