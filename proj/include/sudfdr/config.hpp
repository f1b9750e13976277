#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sudfdr/models.hpp"
#include "sudfdr/thresholds.hpp"

namespace sudfdr {

/// Schema violation in a JSON configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Json = nlohmann::json;

/// {"curve":"linear","alpha":0.5} or {"curve":"aorc","alpha":0.2}.
CriticalValueFunction curve_from_json(const Json& j);
Json to_json(const CriticalValueFunction& rho);

/// {"kind":"gaussian","mu":1.0}, {"kind":"identity"}, {"kind":"dirac"}, {"kind":"step_at_one"}.
AlternativeCdf alternative_from_json(const Json& j);
Json to_json(const AlternativeCdf& F);

/// {"model":"FM","m":10,"m0":7,"F":{...}} or {"model":"RM","m":10,"pi0":0.7,"F":{...}}.
MixtureConfig model_from_json(const Json& j);
Json to_json(const MixtureConfig& cfg);

Json to_json(const ThresholdCollection& t);
ThresholdCollection thresholds_from_json(const Json& j);

/// Apply "a.b.c=value"; value is parsed as JSON when possible, else kept as a string.
void apply_override(Json& doc, const std::string& assignment);

}  // namespace sudfdr
