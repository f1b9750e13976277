#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace sud;
using sudfdr::ConfigError;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sud");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("counterexample command") {
  const auto r = cli({"counterexample"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("# verdict: PASS") != std::string::npos);
  const auto lines = data_lines(r.out);
  CHECK(lines.front() == "lambda,model,fdr_identity,fdr_dirac,difference,role,strict");
  CHECK(lines.size() == 13);
  CHECK(cli({"counterexample", "--set", "m=20"}).code == kExitUsage);
}

TEST_CASE("every CSV carries its provenance") {
  const auto r = cli({"fdr-sweep", "--seed", "77"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("# tool: sud ", 0) == 0);
  CHECK(r.out.find("# command: fdr-sweep") != std::string::npos);
  CHECK(r.out.find("# config: {") != std::string::npos);
  CHECK(r.out.find("# seed: 77") != std::string::npos);
  const auto lines = data_lines(r.out);
  CHECK(lines.front() == "lambda,model,m,m0_or_pi0,F,mu,alpha,fdr_exact,fdr_su_part,fdr_sd_part");
  CHECK(lines.size() == 1 + 4 * 10);
  CHECK(cli({"fdr-sweep", "--seed", "77"}).out == r.out);
}

TEST_CASE("fdr sweep on the step-up row") {
  // RM, lambda = m: same FDR for every alternative.
  const auto res = cmd_fdr_sweep(resolve_config(
      "fdr-sweep", Json::parse(R"({"model":{"model":"RM","m":10,"pi0":0.7,"F":{"kind":"identity"}}})"),
      {"lambdas=[10]"}));
  REQUIRE(res.table.rows.size() == 4);
  for (const auto& row : res.table.rows) CHECK(row[7].get<double>() == doctest::Approx(0.35).epsilon(1e-10));
  CHECK_THROWS_AS(cmd_fdr_sweep(resolve_config("fdr-sweep", Json(), {"lambdas=[]"})), ConfigError);
  CHECK(cli({"fdr-sweep", "--set", "lambdas=[]"}).code == kExitUsage);
  CHECK(cli({"fdr-sweep", "--set", "lambdas=[0]"}).code == kExitUsage);
}

TEST_CASE("config file layering") {
  const std::string path = "test_cli_config.json";
  {
    std::ofstream f(path);
    f << R"({"model":{"model":"FM","m":6,"m0":3,"F":{"kind":"dirac"}},"alternatives":[{"kind":"dirac"}]})";
  }
  const auto r = cli({"fdr-sweep", "--config", path, "--set", "lambdas=[2,1]", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto doc = Json::parse(r.out);
  CHECK(doc["config"]["model"]["m"] == 6);
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["lambda"] == 1);  // rows sorted by lambda
  CHECK(doc["rows"][1]["F"] == "dirac");
  {
    std::ofstream f(path);
    f << "{not json";
  }
  CHECK(cli({"fdr-sweep", "--config", path}).code == kExitUsage);
  std::remove(path.c_str());
  CHECK(cli({"fdr-sweep", "--config", "missing.json"}).code == kExitUsage);
}

TEST_CASE("fdp distribution command") {
  const auto r = cli({"fdp-dist", "--set", "model.m=20", "lambda=20", "bins=5"});
  REQUIRE(r.code == kExitOk);
  const auto lines = data_lines(r.out);
  CHECK(lines.front() == "bin,lower,upper,mass");
  CHECK(lines.size() == 1 + 6);
  CHECK(lines.back().rfind("5,1.0,1.0,", 0) == 0);
  CHECK(cli({"fdp-dist", "--set", "lambda=200"}).code == kExitUsage);
}

TEST_CASE("bound command") {
  const auto r = cli({"bound", "--set", "ms=[1000,10000]", "zetas=[0.5,0.7]"});
  REQUIRE(r.code == kExitOk);
  const auto lines = data_lines(r.out);
  CHECK(lines.front() == "m,zeta,delta,kappa,curve,alpha,u_minus,u_plus,epsilon,gap_bound,vacuous");
  CHECK(lines.size() == 1 + 4);

  const auto fixed = cli({"bound", "--set", "ms=[100]", "deltas=[0.01,0.2]", "model=RM", "--format", "json"});
  REQUIRE(fixed.code == kExitOk);
  const auto doc = Json::parse(fixed.out);
  CHECK(doc["rows"][0]["vacuous"] == true);
  CHECK(doc["rows"][0]["gap_bound"].get<double>() >= 1.0);

  const auto gated = cli({"bound", "--set", R"(curve={"curve":"aorc","alpha":0.2})", "zetas=[0.5]", "kappa=0.999",
                          "ms=[1000]"});
  REQUIRE(gated.code == kExitOk);
  CHECK(gated.out.find("# gate:") != std::string::npos);
  CHECK(cli({"bound", "--set", "model=XM"}).code == kExitUsage);
  CHECK(cli({"bound", "--set", "deltas=\"best\""}).code == kExitUsage);
}

TEST_CASE("validate command") {
  const auto r = cli({"validate", "--n", "20000", "--seed", "5", "--set", "lambdas=[3,10]", "bins=4", "kfwer=[1,2]"});
  CHECK(r.code == kExitOk);
  const auto lines = data_lines(r.out);
  CHECK(lines.front() == "estimator,config_hash,n,seed,mean,std_error,exact,z,pass");
  // 3 alternatives x 2 lambdas x (1 fdr + 5 bins + 2 k-FWER).
  CHECK(lines.size() == 1 + 3 * 2 * 8);
  CHECK(r.out.find("verdict: PASS") != std::string::npos);
  CHECK(config_hash(Json::parse(R"({"a":1})")) == config_hash(Json::parse(R"({"a":1})")));
  CHECK(config_hash(Json::parse(R"({"a":1})")) != config_hash(Json::parse(R"({"a":2})")));
  CHECK(config_hash(Json::parse("{}")).size() == 16);
}

TEST_CASE("validation failures exit with code 3") {
  // Three replicates cannot pin anything down at a tenth of a sigma.
  const auto r = cli({"validate", "--n", "200", "--set", "sigmas=0.0001", "lambdas=[5]"});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("FAIL") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"nonsense"}).code == kExitUsage);
  CHECK(cli({"fdr-sweep", "--format", "xml"}).code == kExitUsage);
  CHECK(cli({"fdr-sweep", "--set", "bogus=1"}).code == kExitUsage);
  CHECK(cli({"fdr-sweep", "--set", "model.F.kind=weird"}).code == kExitUsage);
  CHECK(cli({"fdr-sweep", "--help"}).code == kExitOk);
}
