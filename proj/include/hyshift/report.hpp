#pragma once

#include "json.hpp"

#include "hyshift/criteria.hpp"
#include "hyshift/dynamics.hpp"
#include "hyshift/spaces.hpp"

namespace hyshift {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Finite numbers as numbers, +-inf as the strings "inf" / "-inf".
Json log_number(double v);

Json to_json(const CertifiedValue& v);
Json to_json(const ConditionReport& r);
Json to_json(const BlockCertificate& c);
Json to_json(const GrowthCertificate& g);
Json to_json(const ThetaResult& t);
Json to_json(const HyperResult& h);
Json to_json(const Verdict& v);
Json to_json(const CondNReport& r);
Json to_json(const PolyCheck& p);
Json to_json(const TruncatedVector& x);
Json to_json(const DivergenceWitness& d);

}  // namespace hyshift
