// serialization.hpp - JSON round trips for the domain types.
// Conventions: complex numbers as [re, im] pairs, matrices row-major
// (arrays of row arrays), seeds as 64-bit unsigned integers.

#pragma once

#include "atomiclift/certificate.hpp"
#include "atomiclift/localizer.hpp"
#include "atomiclift/signal_model.hpp"
#include "atomiclift/types.hpp"

#include <json.hpp>

namespace atomiclift {

using Json = nlohmann::json;

Json to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json to_json(const CVec& v);
CVec cvec_from_json(const Json& j);

Json to_json(const RVec& v);
RVec rvec_from_json(const Json& j);

Json to_json(const CMat& m);
CMat cmat_from_json(const Json& j);

Json to_json(const SpikeSignal& s);
SpikeSignal spike_signal_from_json(const Json& j);

std::string subspace_kind_name(SubspaceKind kind);
SubspaceKind subspace_kind_from_name(const std::string& name);

Json to_json(const SubspaceModel& s);
SubspaceModel subspace_from_json(const Json& j);

Json to_json(const LocalizationResult& r);

Json to_json(const ValidationReport& r);

Json to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const Json& j);

}  // namespace atomiclift
