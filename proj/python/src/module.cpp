#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sudfdr/bounds.hpp"
#include "sudfdr/exact.hpp"
#include "sudfdr/montecarlo.hpp"
#include "sudfdr/procedures.hpp"
#include "sudfdr/steck.hpp"

namespace py = pybind11;
using namespace sudfdr;

namespace {

Precision precision(bool rational) { return rational ? Precision::Rational : Precision::Double; }

std::vector<std::vector<double>> as_rows(const JointPmf& p) {
  std::vector<std::vector<double>> rows(p.m() + 1, std::vector<double>(p.m() + 1, 0.0));
  for (int k = 0; k <= p.m(); ++k) {
    for (int j = 0; j <= k; ++j) rows[k][j] = p(k, j);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and Monte-Carlo FDR of step-up-down procedures.";

  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);

  py::class_<CriticalValueFunction>(m, "CriticalValueFunction")
      .def_static("linear", &CriticalValueFunction::linear, py::arg("alpha"))
      .def_static("aorc", &CriticalValueFunction::aorc, py::arg("alpha"))
      .def("__call__", &CriticalValueFunction::operator(), py::arg("u"))
      .def("inverse", &CriticalValueFunction::inverse, py::arg("t"))
      .def_property_readonly("alpha", &CriticalValueFunction::alpha)
      .def_property_readonly("name", &CriticalValueFunction::name);

  py::class_<ThresholdCollection>(m, "ThresholdCollection")
      .def(py::init<std::vector<double>>(), py::arg("t"))
      .def_static("from_rho", &ThresholdCollection::from_rho, py::arg("rho"), py::arg("m"))
      .def_property_readonly("m", &ThresholdCollection::m)
      .def("at", &ThresholdCollection::at, py::arg("k"))
      .def("values", [](const ThresholdCollection& t) {
        return std::vector<double>(t.values().begin(), t.values().end());
      })
      .def("su_part", &ThresholdCollection::su_part, py::arg("lam"))
      .def("sd_part", &ThresholdCollection::sd_part, py::arg("lam"))
      .def("__len__", &ThresholdCollection::m);

  py::class_<AlternativeCdf>(m, "AlternativeCdf")
      .def_static("identity", &AlternativeCdf::identity)
      .def_static("gaussian", &AlternativeCdf::gaussian, py::arg("mu"))
      .def_static("dirac_zero", &AlternativeCdf::dirac_zero)
      .def_static("step_at_one", &AlternativeCdf::step_at_one)
      .def("cdf", &AlternativeCdf::cdf, py::arg("t"))
      .def_property_readonly("mu", &AlternativeCdf::mu)
      .def_property_readonly("name", &AlternativeCdf::name)
      .def("__repr__", &AlternativeCdf::name);

  py::class_<MixtureConfig>(m, "MixtureConfig")
      .def_static("fixed", &MixtureConfig::fixed, py::arg("m"), py::arg("m0"), py::arg("F"))
      .def_static("random", &MixtureConfig::random, py::arg("m"), py::arg("pi0"), py::arg("F"))
      .def_property_readonly("m", &MixtureConfig::m)
      .def_property_readonly("m0", &MixtureConfig::m0)
      .def_property_readonly("pi0", &MixtureConfig::pi0)
      .def_property_readonly("F", &MixtureConfig::F)
      .def("__repr__", &MixtureConfig::describe);

  py::class_<FdrResult>(m, "FdrResult")
      .def_readonly("fdr", &FdrResult::fdr)
      .def_readonly("su_part", &FdrResult::su_part)
      .def_readonly("sd_part", &FdrResult::sd_part);

  m.def("psi", [](const std::vector<double>& t, bool rational) { return psi(t, precision(rational)); },
        py::arg("t"), py::arg("rational") = false);
  m.def("psi_two_pop",
        [](const std::vector<double>& t, int k0, const AlternativeCdf& F, bool rational) {
          return psi_two_pop(t, k0, F, precision(rational));
        },
        py::arg("t"), py::arg("k0"), py::arg("F"), py::arg("rational") = false);

  m.def("fdr_sud",
        [](const ThresholdCollection& t, int lam, const MixtureConfig& cfg, bool rational) {
          return fdr_sud(t, lam, cfg, precision(rational));
        },
        py::arg("t"), py::arg("lam"), py::arg("cfg"), py::arg("rational") = false);
  m.def("sud_joint",
        [](const ThresholdCollection& t, int lam, const MixtureConfig& cfg) { return as_rows(sud_joint(t, lam, cfg)); },
        py::arg("t"), py::arg("lam"), py::arg("cfg"), "Rows k, columns j: P(|R| = k, V = j).");
  m.def("fdp_cdf", &fdp_cdf, py::arg("t"), py::arg("lam"), py::arg("cfg"), py::arg("x"));
  m.def("fdp_pmf_histogram",
        py::overload_cast<const ThresholdCollection&, int, const MixtureConfig&, int>(&fdp_pmf_histogram),
        py::arg("t"), py::arg("lam"), py::arg("cfg"), py::arg("bins"));

  py::class_<SudOutcome>(m, "SudOutcome")
      .def_readonly("k_hat", &SudOutcome::k_hat)
      .def_readonly("rejected", &SudOutcome::rejected)
      .def_readonly("false_rejections", &SudOutcome::false_rejections)
      .def_readonly("fdp", &SudOutcome::fdp);
  m.def("sud_khat",
        [](const std::vector<double>& p, const ThresholdCollection& t, int lam, int m0) {
          return sud_khat(p, t, lam, m0);
        },
        py::arg("p"), py::arg("t"), py::arg("lam"), py::arg("m0") = 0);

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("mean", &McEstimate::mean)
      .def_readonly("std_error", &McEstimate::std_error)
      .def_readonly("n_replicates", &McEstimate::n_replicates)
      .def_readonly("seed", &McEstimate::seed);
  m.def("simulate_fdr",
        [](const ThresholdCollection& t, int lam, const MixtureConfig& cfg, std::int64_t n, std::uint64_t seed,
           unsigned threads) {
          py::gil_scoped_release release;
          return simulate_fdr(t, lam, cfg, n, seed, McOptions{threads});
        },
        py::arg("t"), py::arg("lam"), py::arg("cfg"), py::arg("n"), py::arg("seed"), py::arg("threads") = 0);
  m.def("simulate_kfwer",
        [](const ThresholdCollection& t, int lam, const MixtureConfig& cfg, int k, std::int64_t n, std::uint64_t seed,
           unsigned threads) {
          py::gil_scoped_release release;
          return simulate_kfwer(t, lam, cfg, k, n, seed, McOptions{threads});
        },
        py::arg("t"), py::arg("lam"), py::arg("cfg"), py::arg("k"), py::arg("n"), py::arg("seed"),
        py::arg("threads") = 0);

  py::class_<BoundResult>(m, "BoundResult")
      .def_readonly("u_minus", &BoundResult::u_minus)
      .def_readonly("u_plus", &BoundResult::u_plus)
      .def_readonly("epsilon", &BoundResult::epsilon)
      .def_readonly("gap_bound", &BoundResult::gap_bound)
      .def_readonly("vacuous", &BoundResult::vacuous);
  m.def("gap_bound_fm",
        [](const CriticalValueFunction& rho, double zeta, double delta, int mm, double kappa, int m0) {
          return gap_bound_fm(BoundInputs{rho, zeta, delta, mm, kappa}, m0);
        },
        py::arg("rho"), py::arg("zeta"), py::arg("delta"), py::arg("m"), py::arg("kappa"), py::arg("m0"));
  m.def("gap_bound_rm",
        [](const CriticalValueFunction& rho, double zeta, double delta, int mm, double kappa, double gamma) {
          return gap_bound_rm(BoundInputs{rho, zeta, delta, mm, kappa}, gamma);
        },
        py::arg("rho"), py::arg("zeta"), py::arg("delta"), py::arg("m"), py::arg("kappa"), py::arg("gamma"));
  m.def("rm_gamma_rule", &rm_gamma_rule, py::arg("m"));
  m.def("aorc_v_delta", &aorc_v_delta, py::arg("alpha"), py::arg("zeta"), py::arg("delta"));
}
