#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>

#include "sudfdr/bounds.hpp"
#include "sudfdr/exact.hpp"
#include "sudfdr/montecarlo.hpp"
#include "sudfdr/steck.hpp"

#ifndef SUD_VERSION
#define SUD_VERSION "0.0.0"
#endif

namespace sud {

using namespace sudfdr;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240917;

void check_keys(const Json& cfg, std::initializer_list<const char*> allowed) {
  if (!cfg.is_object()) throw ConfigError("configuration must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : cfg.items()) {
    if (!ok.count(item.key()) && item.key() != "seed" && item.key() != "n") {
      throw ConfigError("unknown configuration key '" + item.key() + "'");
    }
  }
}

const Json& field(const Json& cfg, const char* key) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) throw ConfigError(std::string("missing key '") + key + "'");
  return *it;
}

int int_field(const Json& cfg, const char* key) {
  const Json& v = field(cfg, key);
  if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

double real_field(const Json& cfg, const char* key) {
  const Json& v = field(cfg, key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t seed_of(const Json& cfg) {
  const auto it = cfg.find("seed");
  if (it == cfg.end()) return kDefaultSeed;
  if (!it->is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
  return it->get<std::uint64_t>();
}

std::int64_t n_of(const Json& cfg, std::int64_t fallback) {
  const auto it = cfg.find("n");
  if (it == cfg.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() < 1) throw ConfigError("'n' must be a positive integer");
  return it->get<std::int64_t>();
}

std::vector<int> int_list(const Json& v, const char* key) {
  if (!v.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ConfigError(std::string("'") + key + "' must hold integers");
    out.push_back(x.get<int>());
  }
  if (out.empty()) throw ConfigError(std::string("'") + key + "' must not be empty");
  return out;
}

std::vector<double> real_list(const Json& v, const char* key) {
  if (!v.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string("'") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  if (out.empty()) throw ConfigError(std::string("'") + key + "' must not be empty");
  return out;
}

std::vector<int> lambdas_of(const Json& cfg, int m) {
  std::vector<int> out;
  if (cfg.contains("lambdas")) {
    out = int_list(cfg["lambdas"], "lambdas");
  } else {
    for (int l = 1; l <= m; ++l) out.push_back(l);
  }
  for (int l : out) {
    if (l < 1 || l > m) throw ConfigError("lambda " + std::to_string(l) + " outside [1, m]");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<AlternativeCdf> alternatives_of(const Json& cfg, const MixtureConfig& model) {
  if (!cfg.contains("alternatives")) return {model.F()};
  const Json& v = cfg["alternatives"];
  if (!v.is_array() || v.empty()) throw ConfigError("'alternatives' must be a non-empty array");
  std::vector<AlternativeCdf> out;
  for (const auto& f : v) out.push_back(alternative_from_json(f));
  return out;
}

Precision precision_of(const Json& cfg) {
  if (!cfg.contains("precision")) return Precision::Double;
  const Json& v = cfg["precision"];
  if (v == "double") return Precision::Double;
  if (v == "rational") return Precision::Rational;
  throw ConfigError("'precision' must be \"double\" or \"rational\"");
}

Json m0_or_pi0(const MixtureConfig& cfg) {
  if (cfg.model() == ModelKind::FM) return cfg.m0();
  return cfg.pi0();
}

Json mu_of(const AlternativeCdf& F) {
  if (F.kind() == AltKind::GaussianLocation) return F.mu();
  return nullptr;
}

const char* model_name(ModelKind k) { return k == ModelKind::FM ? "FM" : "RM"; }

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  return v.dump();
}

Table make_table(const std::string& command, const Json& config, std::vector<std::string> columns) {
  Table t;
  t.command = command;
  t.config = config;
  t.columns = std::move(columns);
  return t;
}

}  // namespace

void render(const Table& table, Format format, std::ostream& out) {
  if (format == Format::Json) {
    Json doc;
    doc["tool"] = "sud";
    doc["version"] = SUD_VERSION;
    doc["command"] = table.command;
    doc["config"] = table.config;
    doc["seed"] = table.config.value("seed", kDefaultSeed);
    doc["notes"] = table.notes;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      Json r = Json::object();
      for (std::size_t i = 0; i < table.columns.size(); ++i) r[table.columns[i]] = row[i];
      rows.push_back(r);
    }
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# tool: sud " << SUD_VERSION << '\n';
  out << "# command: " << table.command << '\n';
  out << "# config: " << table.config.dump() << '\n';
  out << "# seed: " << table.config.value("seed", kDefaultSeed) << '\n';
  for (const auto& note : table.notes) out << "# " << note << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"fdr-sweep", "fdp-dist", "bound", "counterexample", "validate"};
  return names;
}

Json default_config(const std::string& command) {
  const Json linear = {{"curve", "linear"}, {"alpha", 0.5}};
  if (command == "fdr-sweep") {
    return {{"model", {{"model", "FM"}, {"m", 10}, {"m0", 7}, {"F", {{"kind", "identity"}}}}},
            {"curve", linear},
            {"alternatives",
             {{{"kind", "dirac"}},
              {{"kind", "gaussian"}, {"mu", 3.0}},
              {{"kind", "gaussian"}, {"mu", 1.0}},
              {{"kind", "identity"}}}}};
  }
  if (command == "fdp-dist") {
    return {{"model", {{"model", "RM"}, {"m", 100}, {"pi0", 0.5}, {"F", {{"kind", "gaussian"}, {"mu", 0.5}}}}},
            {"curve", linear},
            {"lambda", 100},
            {"bins", 50}};
  }
  if (command == "bound") {
    return {{"curve", {{"curve", "linear"}, {"alpha", 0.5}}},
            {"model", "FM"},
            {"ms", {1000, 10000, 100000, 1000000, 10000000}},
            {"zetas", {0.7}},
            {"kappa", 0.5},
            {"deltas", "analytic"},
            {"grid", 2000}};
  }
  if (command == "counterexample") return Json::object();
  if (command == "validate") {
    return {{"model", {{"model", "FM"}, {"m", 10}, {"m0", 7}, {"F", {{"kind", "identity"}}}}},
            {"curve", linear},
            {"alternatives", {{{"kind", "identity"}}, {{"kind", "gaussian"}, {"mu", 1.0}}, {{"kind", "dirac"}}}},
            {"lambdas", {1, 4, 5, 6, 7, 10}},
            {"n", 100000},
            {"sigmas", 4.0}};
  }
  throw ConfigError("unknown command '" + command + "'");
}

Json resolve_config(const std::string& command, const Json& file_config, const std::vector<std::string>& overrides) {
  Json cfg = default_config(command);
  if (!file_config.is_null()) {
    if (!file_config.is_object()) throw ConfigError("configuration file must hold a JSON object");
    cfg.merge_patch(file_config);
  }
  for (const auto& o : overrides) apply_override(cfg, o);
  return cfg;
}

CommandResult cmd_fdr_sweep(const Json& config) {
  check_keys(config, {"model", "curve", "alternatives", "lambdas", "precision"});
  const MixtureConfig base = model_from_json(field(config, "model"));
  const CriticalValueFunction rho = curve_from_json(field(config, "curve"));
  const auto alternatives = alternatives_of(config, base);
  const auto lambdas = lambdas_of(config, base.m());
  const Precision precision = precision_of(config);
  const ThresholdCollection t = ThresholdCollection::from_rho(rho, base.m());

  CommandResult res;
  res.table = make_table("fdr-sweep", config,
                         {"lambda", "model", "m", "m0_or_pi0", "F", "mu", "alpha", "fdr_exact", "fdr_su_part",
                          "fdr_sd_part"});
  for (const auto& F : alternatives) {
    const MixtureConfig cfg = base.with_alternative(F);
    for (int lambda : lambdas) {
      const FdrResult r = fdr_sud(t, lambda, cfg, precision);
      res.table.rows.push_back({lambda, model_name(cfg.model()), cfg.m(), m0_or_pi0(cfg), F.name(), mu_of(F),
                                rho.alpha(), r.fdr, r.su_part, r.sd_part});
    }
  }
  return res;
}

CommandResult cmd_fdp_dist(const Json& config) {
  check_keys(config, {"model", "curve", "lambda", "bins", "precision"});
  const MixtureConfig cfg = model_from_json(field(config, "model"));
  const CriticalValueFunction rho = curve_from_json(field(config, "curve"));
  const int lambda = config.contains("lambda") ? int_field(config, "lambda") : cfg.m();
  const int bins = config.contains("bins") ? int_field(config, "bins") : 50;
  if (lambda < 1 || lambda > cfg.m()) throw ConfigError("'lambda' outside [1, m]");
  if (bins < 1) throw ConfigError("'bins' must be >= 1");
  const ThresholdCollection t = ThresholdCollection::from_rho(rho, cfg.m());

  const JointPmf pmf = sud_joint(t, lambda, cfg, precision_of(config));
  const auto masses = fdp_pmf_histogram(pmf, bins);
  CommandResult res;
  res.table = make_table("fdp-dist", config, {"bin", "lower", "upper", "mass"});
  std::ostringstream note;
  note.precision(17);
  note << "fdr: " << pmf.fdr() << " total_mass: " << pmf.total();
  res.table.notes.push_back(note.str());
  for (int i = 0; i <= bins; ++i) {
    // The final entry is the atom FDP = 1.
    const double lower = i < bins ? static_cast<double>(i) / bins : 1.0;
    const double upper = i < bins ? static_cast<double>(i + 1) / bins : 1.0;
    res.table.rows.push_back({i, lower, upper, masses[static_cast<std::size_t>(i)]});
  }
  return res;
}

CommandResult cmd_bound(const Json& config) {
  check_keys(config, {"curve", "model", "ms", "zetas", "kappa", "deltas", "grid"});
  const CriticalValueFunction rho = curve_from_json(field(config, "curve"));
  const Json& model = field(config, "model");
  if (model != "FM" && model != "RM") throw ConfigError("'model' must be \"FM\" or \"RM\"");
  const bool fm = model == "FM";
  const auto ms = int_list(field(config, "ms"), "ms");
  const auto zetas = real_list(field(config, "zetas"), "zetas");
  const double kappa = real_field(config, "kappa");
  const int grid = config.contains("grid") ? int_field(config, "grid") : 2000;
  const Json& deltas_spec = field(config, "deltas");
  std::vector<double> fixed_deltas;
  std::string rule;
  if (deltas_spec.is_string()) {
    rule = deltas_spec.get<std::string>();
    if (rule != "analytic" && rule != "grid") throw ConfigError("'deltas' must be an array, \"analytic\" or \"grid\"");
  } else {
    fixed_deltas = real_list(deltas_spec, "deltas");
  }
  const std::string curve = rho.kind() == CurveKind::Aorc ? "aorc" : "linear";

  CommandResult res;
  res.table = make_table("bound", config,
                         {"m", "zeta", "delta", "kappa", "curve", "alpha", "u_minus", "u_plus", "epsilon", "gap_bound",
                          "vacuous"});
  auto gate_note = [&](int m, double zeta, double delta) {
    if (rho.kind() != CurveKind::Aorc) return;
    std::ostringstream os;
    os.precision(10);
    try {
      const double v = aorc_v_delta(rho.alpha(), zeta, delta);
      if (kappa < v) return;
      os << "gate: m=" << m << " zeta=" << zeta << " delta=" << delta << " kappa=" << kappa << " >= v_delta=" << v;
    } catch (const std::exception& e) {
      os << "gate: m=" << m << " zeta=" << zeta << " delta=" << delta << " unavailable (" << e.what() << ")";
    }
    res.table.notes.push_back(os.str());
  };

  for (int m : ms) {
    for (double zeta : zetas) {
      const int m0 = static_cast<int>(std::lround(zeta * m));
      if (fm && (m0 <= 0 || m0 >= m)) throw ConfigError("FM bound needs 0 < round(zeta m) < m");
      auto emit = [&](double delta, const BoundResult& b) {
        gate_note(m, zeta, delta);
        res.table.rows.push_back({m, zeta, delta, kappa, curve, rho.alpha(), b.u_minus, b.u_plus, b.epsilon,
                                  b.gap_bound, b.vacuous});
      };
      if (fixed_deltas.empty()) {
        const DeltaChoice c = fm ? optimize_delta_fm(rho, zeta, m, kappa, m0, grid)
                                 : optimize_delta_rm(rho, zeta, m, kappa, grid);
        if (rule == "analytic") {
          emit(c.delta, c.bound);
        } else {
          emit(c.grid_delta, c.grid_bound);
        }
        continue;
      }
      for (double delta : fixed_deltas) {
        const BoundInputs in{rho, zeta, delta, m, kappa};
        emit(delta, fm ? gap_bound_fm(in, m0) : gap_bound_rm(in, rm_gamma_rule(m)));
      }
    }
  }
  return res;
}

CommandResult cmd_counterexample(const Json& config) {
  check_keys(config, {});
  constexpr int m = 10;
  constexpr int m0 = 7;
  constexpr double pi0 = 0.7;
  const ThresholdCollection t = ThresholdCollection::from_rho(CriticalValueFunction::linear(0.5), m);
  const auto identity = AlternativeCdf::identity();
  const auto dirac = AlternativeCdf::dirac_zero();

  CommandResult res;
  res.table = make_table("counterexample", config,
                         {"lambda", "model", "fdr_identity", "fdr_dirac", "difference", "role", "strict"});
  bool pass = true;
  for (ModelKind model : {ModelKind::FM, ModelKind::RM}) {
    for (int lambda : {1, 4, 5, 6, 7, 10}) {
      const bool claim = lambda >= 4 && lambda <= 7;
      const auto cfg_id = model == ModelKind::FM ? MixtureConfig::fixed(m, m0, identity)
                                                 : MixtureConfig::random(m, pi0, identity);
      const double a = fdr_sud(t, lambda, cfg_id).fdr;
      const double b = fdr_sud(t, lambda, cfg_id.with_alternative(dirac)).fdr;
      const bool strict = a - b > 1e-12;  // float noise must not count as a strict gap
      if (claim && !strict) pass = false;
      res.table.rows.push_back({lambda, model_name(model), a, b, a - b, claim ? "claim" : "context", strict});
    }
  }
  res.table.notes.push_back(std::string("verdict: ") + (pass ? "PASS" : "FAIL"));
  res.exit_code = pass ? kExitOk : kExitValidation;
  return res;
}

CommandResult cmd_validate(const Json& config) {
  check_keys(config, {"model", "curve", "alternatives", "lambdas", "sigmas", "bins", "kfwer"});
  const MixtureConfig base = model_from_json(field(config, "model"));
  const CriticalValueFunction rho = curve_from_json(field(config, "curve"));
  const auto alternatives = alternatives_of(config, base);
  const auto lambdas = lambdas_of(config, base.m());
  const double sigmas = config.contains("sigmas") ? real_field(config, "sigmas") : 4.0;
  if (!(sigmas > 0.0)) throw ConfigError("'sigmas' must be positive");
  const int bins = config.contains("bins") ? int_field(config, "bins") : 0;
  if (bins < 0) throw ConfigError("'bins' must be >= 0");
  const std::vector<int> ks = config.contains("kfwer") ? int_list(config["kfwer"], "kfwer") : std::vector<int>{};
  const std::int64_t n = n_of(config, 100000);
  const std::uint64_t seed = seed_of(config);
  const ThresholdCollection t = ThresholdCollection::from_rho(rho, base.m());

  CommandResult res;
  res.table = make_table("validate", config,
                         {"estimator", "config_hash", "n", "seed", "mean", "std_error", "exact", "z", "pass"});
  int failures = 0;
  auto add = [&](const std::string& name, const std::string& hash, const McEstimate& mc, double exact) {
    const VerdictReport v = cross_validate(exact, mc, sigmas);
    failures += v.pass ? 0 : 1;
    res.table.rows.push_back({name, hash, mc.n_replicates, mc.seed, mc.mean,
                              mc.std_error ? Json(*mc.std_error) : Json(nullptr), exact,
                              std::isfinite(v.z) ? Json(v.z) : Json(nullptr), v.pass});
  };

  for (const auto& F : alternatives) {
    const MixtureConfig cfg = base.with_alternative(F);
    const std::string hash = config_hash(Json{{"model", to_json(cfg)}, {"curve", to_json(rho)}});
    const auto mcs = simulate_fdr_sweep(t, lambdas, cfg, n, seed);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const int lambda = lambdas[i];
      const std::string tag = "[F=" + F.name() + ",lambda=" + std::to_string(lambda);
      add("fdr" + tag + "]", hash, mcs[i], fdr_sud(t, lambda, cfg).fdr);

      if (bins == 0 && ks.empty()) continue;
      const JointPmf pmf = sud_joint(t, lambda, cfg);
      if (bins > 0) {
        const auto exact = fdp_pmf_histogram(pmf, bins);
        const McEstimate hist = simulate_fdp_hist(t, lambda, cfg, n, bins, seed);
        for (int b = 0; b <= bins; ++b) {
          McEstimate cell;
          cell.n_replicates = n;
          cell.seed = seed;
          cell.mean = hist.per_bin[static_cast<std::size_t>(b)].mass;
          // Spread from the larger of the two masses, so a zero count still gets a scale.
          const double p = std::max(cell.mean, exact[static_cast<std::size_t>(b)]);
          cell.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
          add("fdp_bin" + tag + ",bin=" + std::to_string(b) + "]", hash, cell, exact[static_cast<std::size_t>(b)]);
        }
      }
      for (int k : ks) {
        double exact = 0.0;
        for (int kk = 0; kk <= pmf.m(); ++kk) {
          for (int j = std::max(k, pmf.j_min(kk)); j <= pmf.j_max(kk); ++j) exact += pmf(kk, j);
        }
        add("kfwer" + tag + ",k=" + std::to_string(k) + "]", hash, simulate_kfwer(t, lambda, cfg, k, n, seed), exact);
      }
    }
  }
  res.table.notes.push_back("verdict: " + std::string(failures == 0 ? "PASS" : "FAIL") +
                            " failures=" + std::to_string(failures) + " sigmas=" + Json(sigmas).dump());
  res.exit_code = failures == 0 ? kExitOk : kExitValidation;
  return res;
}

CommandResult run_command(const std::string& command, const Json& config) {
  if (command == "fdr-sweep") return cmd_fdr_sweep(config);
  if (command == "fdp-dist") return cmd_fdp_dist(config);
  if (command == "bound") return cmd_bound(config);
  if (command == "counterexample") return cmd_counterexample(config);
  if (command == "validate") return cmd_validate(config);
  throw ConfigError("unknown command '" + command + "'");
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sud
