#include "sudfdr/config.hpp"

#include <vector>

namespace sudfdr {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw ConfigError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("missing key '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

int integer(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

// Domain errors from the constructors are schema violations here.
template <class Fn>
auto guarded(Fn fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

CriticalValueFunction curve_from_json(const Json& j) {
  const std::string curve = text(j, "curve");
  const double alpha = number(j, "alpha");
  return guarded([&] {
    if (curve == "linear") return CriticalValueFunction::linear(alpha);
    if (curve == "aorc") return CriticalValueFunction::aorc(alpha);
    throw ConfigError("unknown curve '" + curve + "' (expected linear or aorc)");
  });
}

Json to_json(const CriticalValueFunction& rho) {
  switch (rho.kind()) {
    case CurveKind::Linear: return {{"curve", "linear"}, {"alpha", rho.alpha()}};
    case CurveKind::Aorc: return {{"curve", "aorc"}, {"alpha", rho.alpha()}};
    case CurveKind::Custom: break;
  }
  throw ConfigError("custom critical value functions have no JSON form");
}

AlternativeCdf alternative_from_json(const Json& j) {
  const std::string kind = text(j, "kind");
  if (kind == "identity") return AlternativeCdf::identity();
  if (kind == "dirac") return AlternativeCdf::dirac_zero();
  if (kind == "step_at_one") return AlternativeCdf::step_at_one();
  if (kind == "gaussian") {
    const double mu = number(j, "mu");
    return guarded([&] { return AlternativeCdf::gaussian(mu); });
  }
  throw ConfigError("unknown alternative '" + kind + "'");
}

Json to_json(const AlternativeCdf& F) {
  Json j = {{"kind", F.name()}};
  if (F.kind() == AltKind::GaussianLocation) j["mu"] = F.mu();
  return j;
}

MixtureConfig model_from_json(const Json& j) {
  const std::string model = text(j, "model");
  const int m = integer(j, "m");
  const AlternativeCdf F = alternative_from_json(require(j, "F"));
  if (model == "FM") {
    const int m0 = integer(j, "m0");
    return guarded([&] { return MixtureConfig::fixed(m, m0, F); });
  }
  if (model == "RM") {
    const double pi0 = number(j, "pi0");
    return guarded([&] { return MixtureConfig::random(m, pi0, F); });
  }
  throw ConfigError("unknown model '" + model + "' (expected FM or RM)");
}

Json to_json(const MixtureConfig& cfg) {
  Json j = {{"model", cfg.model() == ModelKind::FM ? "FM" : "RM"}, {"m", cfg.m()}};
  if (cfg.model() == ModelKind::FM) {
    j["m0"] = cfg.m0();
  } else {
    j["pi0"] = cfg.pi0();
  }
  j["F"] = to_json(cfg.F());
  return j;
}

Json to_json(const ThresholdCollection& t) { return Json(t.values()); }

ThresholdCollection thresholds_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("thresholds must be a JSON array");
  std::vector<double> values;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("thresholds must be numbers");
    values.push_back(v.get<double>());
  }
  return guarded([&] { return ThresholdCollection(values); });
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("empty key in override: " + assignment);
    if (node->is_null()) *node = Json::object();
    if (!node->is_object()) throw ConfigError("override path crosses a non-object: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace sudfdr
