#include <doctest.h>

#include <algorithm>
#include <random>

#include "sudfdr/models.hpp"
#include "sudfdr/procedures.hpp"

using namespace sudfdr;

namespace {

// Rejection count straight from the definition, without the early exits of
// the library implementation.
int khat_by_definition(std::vector<double> p, const ThresholdCollection& t, int lambda) {
  std::sort(p.begin(), p.end());
  const int m = t.m();
  auto below = [&](int k) { return p[k - 1] <= t.at(k); };
  if (below(lambda)) {
    int best = lambda;
    for (int k = lambda; k <= m; ++k) {
      bool all = true;
      for (int i = lambda; i <= k; ++i) all = all && below(i);
      if (all) best = k;
    }
    return best;
  }
  int best = 0;
  for (int k = 1; k < lambda; ++k) {
    if (below(k)) best = k;
  }
  return best;
}

const std::vector<double> kTenPValues = {0.8, 0.05, 0.33, 0.01, 0.7, 0.22, 0.1, 0.28, 0.6, 0.15};

}  // namespace

TEST_CASE("worked example with ten p-values") {
  const auto t = ThresholdCollection::from_rho(CriticalValueFunction::linear(0.5), 10);
  CHECK(sud_khat(kTenPValues, t, 8).k_hat == 7);
  CHECK(sud_khat(kTenPValues, t, 4).k_hat == 7);
  CHECK(sud_khat(kTenPValues, t, 10).k_hat == 7);
  CHECK(sud_khat(kTenPValues, t, 1).k_hat == 7);

  // Rejected set is {p_i <= t_7 = 0.35}, in input order.
  const auto out = sud_khat(kTenPValues, t, 8, 3);
  CHECK(out.rejected == std::vector<int>{1, 2, 3, 5, 6, 7, 9});
  CHECK(out.false_rejections == 2);
  CHECK(out.fdp == doctest::Approx(2.0 / 7.0));

  const EmpiricalCdf G(kTenPValues);
  FixedPointOptions opts;
  opts.lattice = 10;
  CHECK(u_operator(0.4, [&](double x) { return G(x); }, CriticalValueFunction::linear(0.5), opts) ==
        doctest::Approx(0.4));
}

TEST_CASE("step-up and step-down differ across a gap") {
  const auto t = ThresholdCollection(std::vector<double>{0.01, 0.02, 0.03, 0.04});
  const std::vector<double> p = {0.005, 0.5, 0.5, 0.035};
  std::vector<double> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  CHECK(step_down_count(sorted, t) == 1);
  CHECK(step_up_count(sorted, t) == 1);
  const std::vector<double> q = {0.005, 0.5, 0.011, 0.035};
  std::vector<double> sq = q;
  std::sort(sq.begin(), sq.end());
  // p_(2) = 0.011 <= 0.02, p_(3) = 0.035 > 0.03, p_(4) = 0.5 > 0.04.
  CHECK(step_down_count(sq, t) == 2);
  CHECK(step_up_count(sq, t) == 2);
  const std::vector<double> r = {0.015, 0.016, 0.025, 0.035};
  // p_(1) > t_1 stops step-down at 0; step-up finds p_(4) <= t_4.
  CHECK(step_down_count(r, t) == 0);
  CHECK(step_up_count(r, t) == 4);
  // From lambda = 2 the step-down branch runs through to the end.
  CHECK(sud_khat(r, t, 2).k_hat == 4);
  CHECK(sud_khat(r, t, 1).k_hat == 0);
}

TEST_CASE("ties keep |R| equal to k_hat") {
  const auto t = ThresholdCollection::from_rho(CriticalValueFunction::linear(0.5), 5);
  const std::vector<double> p(5, 0.2);
  for (int lambda = 1; lambda <= 5; ++lambda) {
    const auto out = sud_khat(p, t, lambda);
    CHECK(static_cast<int>(out.rejected.size()) == out.k_hat);
  }
  CHECK(sud_khat(p, t, 5).k_hat == 5);
  CHECK(sud_khat(p, t, 1).k_hat == 0);
}

TEST_CASE("agreement with the definition on random families") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 3000; ++rep) {
    const int m = 1 + rep % 12;
    const auto rho = rep % 2 ? CriticalValueFunction::linear(0.6) : CriticalValueFunction::aorc(0.3);
    const auto t = ThresholdCollection::from_rho(rho, m);
    std::vector<double> p(m);
    for (auto& x : p) x = std::pow(u(gen), 3.0);
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (int lambda = 1; lambda <= m; ++lambda) {
      const auto out = sud_khat(p, t, lambda);
      CHECK(out.k_hat == khat_by_definition(p, t, lambda));
      CHECK(static_cast<int>(out.rejected.size()) == out.k_hat);
    }
    CHECK(step_up_count(sorted, t) == sud_khat(p, t, m).k_hat);
    CHECK(step_down_count(sorted, t) == sud_khat(p, t, 1).k_hat);
  }
}

TEST_CASE("fdp conventions") {
  const auto t = ThresholdCollection::from_rho(CriticalValueFunction::linear(0.1), 3);
  const auto none = sud_khat(std::vector<double>{0.9, 0.8, 0.7}, t, 2, 3);
  CHECK(none.k_hat == 0);
  CHECK(none.fdp == 0.0);
  CHECK_THROWS(sud_khat(std::vector<double>{0.1, 0.2}, t, 1));
  CHECK_THROWS(sud_khat(std::vector<double>{0.1, 0.2, 0.3}, t, 0));
  CHECK_THROWS(sud_khat(std::vector<double>{0.1, 0.2, 0.3}, t, 4));
  CHECK_THROWS(sud_khat(std::vector<double>{0.1, 0.2, 0.3}, t, 1, 4));
}

TEST_CASE("empirical c.d.f.") {
  const EmpiricalCdf G(std::vector<double>{0.3, 0.1, 0.3, 0.9});
  CHECK(G(0.0) == 0.0);
  CHECK(G(0.1) == 0.25);
  CHECK(G(0.3) == 0.75);
  CHECK(G(1.0) == 1.0);
  CHECK_THROWS(EmpiricalCdf(std::vector<double>{}));
}

TEST_CASE("fixed-point operator on the Dirac-uniform c.d.f.") {
  // G(rho(u)) = 1 - zeta + zeta alpha u has the single crossing (1 - zeta)/(1 - zeta alpha).
  const auto rho = CriticalValueFunction::linear(0.5);
  const double zeta = 0.7;
  const double star = (1 - zeta) / (1 - zeta * 0.5);
  auto G = [zeta](double x) { return 1 - zeta + zeta * x; };
  CHECK(u_operator(0.1, G, rho) == doctest::Approx(star).epsilon(1e-11));
  CHECK(u_operator(0.9, G, rho) == doctest::Approx(star).epsilon(1e-11));
  CHECK(u_operator(star, G, rho) == doctest::Approx(star).epsilon(1e-11));
  CHECK_THROWS(u_operator(1.5, G, rho));
}

TEST_CASE("fixed-point operator picks the crossing on the tau side") {
  // G o rho - u changes sign at 0.2 (down), 0.5 (jump up) and 0.8 (down).
  const auto rho = CriticalValueFunction::custom([](double u) { return u; }, "identity");
  auto G = [](double x) { return x < 0.5 ? 0.2 : 0.8; };
  // From tau = 0.6: G = 0.8 >= 0.6, first u >= tau with G <= u is 0.8.
  CHECK(u_operator(0.6, G, rho) == doctest::Approx(0.8).epsilon(1e-11));
  // From tau = 0.4: G = 0.2 < 0.4, last u <= tau with G >= u is 0.2.
  CHECK(u_operator(0.4, G, rho) == doctest::Approx(0.2).epsilon(1e-11));
}

TEST_CASE("sandwich inequality on random families") {
  std::mt19937_64 gen(17);
  const CriticalValueFunction curves[] = {CriticalValueFunction::linear(0.5), CriticalValueFunction::aorc(0.2)};
  int checked = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    const int m = 2 + rep % 30;
    const auto cfg = rep % 2 ? MixtureConfig::fixed(m, m / 2, AlternativeCdf::gaussian(2.0))
                             : MixtureConfig::random(m, 0.6, AlternativeCdf::dirac_zero());
    const auto s = sample(cfg, gen());
    const int lambda = 1 + static_cast<int>(gen() % static_cast<unsigned>(m));
    const auto r = check_sandwich(s.p, curves[rep % 2], lambda);
    CHECK(r.holds);
    CHECK(r.lower <= r.upper);
    ++checked;
  }
  CHECK(checked == 2000);
}
