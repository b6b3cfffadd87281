#pragma once

#include "blochcert/omega_distance.hpp"
#include "blochcert/operator_monotone.hpp"
#include "blochcert/seminorms.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace blochcert {

using Json = nlohmann::ordered_json;

// JSON report, schema version "1". Key order is fixed so that equal inputs give equal bytes.
struct Report {
  std::string command;
  std::uint64_t seed = 42;
  Json inputs = Json::object();
  Json results = Json::object();
  Json timings = Json::object();  // milliseconds; filled only on request
  Json warnings = Json::array();

  Json to_json() const;
};

Json to_json(const Vector& v);
Json to_json(const DistanceResult& r);
Json to_json(const BlochEstimate& e);
Json to_json(const LipschitzEstimate& e);
Json to_json(const ConditionReport& c);
Json to_json(const AdmissibilityReport& r);
Json to_json(const EqualityCertificate& c);
Json to_json(const LimRatioTable& t);
Json to_json(const SlackSurvey& s);
Json to_json(const DerivativeMonotonicity& m);

}  // namespace blochcert
