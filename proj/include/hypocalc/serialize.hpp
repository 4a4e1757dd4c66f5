#ifndef HYPOCALC_SERIALIZE_HPP
#define HYPOCALC_SERIALIZE_HPP

#include <json.hpp>

#include "hypocalc/bchflow.hpp"
#include "hypocalc/filtration.hpp"
#include "hypocalc/hermite.hpp"
#include "hypocalc/hncone.hpp"
#include "hypocalc/lie.hpp"

namespace hypocalc {

using Json = nlohmann::ordered_json;

Json to_json(const FiberReport& rep, const WeightedGenerators& gen);
Json to_json(const GradedLieAlgebra& g);
GradedLieAlgebra algebra_from_json(const Json& j);
Json to_json(const ConeSample& sample);
Json to_json(const MembershipVerdict& v);
Json to_json(const SpectralReport& rep);
Json to_json(const InjectivityReport& rep);
Json to_json(const HypoellipticityEvidence& ev);
Json to_json(const OrderFit& fit);

std::string cone_sample_csv(const ConeSample& sample);
std::string order_fit_csv(const OrderFit& fit);
std::string eigenvalue_csv(const SpectralReport& rep);

/// Deterministic float formatting (17 significant digits round-trips).
std::string format_double(double v);

}  // namespace hypocalc

#endif
