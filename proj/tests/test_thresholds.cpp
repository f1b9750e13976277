#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sudfdr/thresholds.hpp"

using namespace sudfdr;

TEST_CASE("linear curve") {
  const auto rho = CriticalValueFunction::linear(0.5);
  CHECK(rho(0.0) == 0.0);
  CHECK(rho(0.4) == doctest::Approx(0.2));
  CHECK(rho.inverse(0.2) == doctest::Approx(0.4));
  CHECK(rho.check().ok());
  CHECK_THROWS_AS(rho(1.5), std::domain_error);
  CHECK_THROWS_AS(rho(-0.1), std::domain_error);
  CHECK_THROWS(CriticalValueFunction::linear(0.0));
  CHECK_THROWS(CriticalValueFunction::linear(1.5));
}

TEST_CASE("AORC curve") {
  const auto rho = CriticalValueFunction::aorc(0.2);
  CHECK(rho(1.0) == 1.0);
  CHECK(rho(0.5) == doctest::Approx(0.1 / 0.6));
  for (double u : {0.01, 0.3, 0.77, 0.999}) CHECK(rho.inverse(rho(u)) == doctest::Approx(u).epsilon(1e-12));
  CHECK(rho.check().ok());
}

TEST_CASE("grid checks flag bad curves") {
  const auto decreasing = CriticalValueFunction::custom([](double u) { return 1.0 - u; }, "decreasing");
  CHECK_FALSE(decreasing.check().monotone);
  CHECK_FALSE(decreasing.check().diagnostic.empty());
  // Concave: rho(u)/u decreases.
  const auto concave = CriticalValueFunction::custom([](double u) { return 0.5 * std::sqrt(u); });
  const auto report = concave.check();
  CHECK(report.monotone);
  CHECK_FALSE(report.ratio_monotone);
  const auto outside = CriticalValueFunction::custom([](double u) { return 2.0 * u; });
  CHECK_FALSE(outside.check().in_unit_interval);
  CHECK_THROWS(decreasing.inverse(0.5));
}

TEST_CASE("threshold collections") {
  const auto t = ThresholdCollection::from_rho(CriticalValueFunction::linear(0.5), 10);
  CHECK(t.m() == 10);
  CHECK(t.at(0) == 0.0);
  CHECK(t.at(1) == doctest::Approx(0.05));
  CHECK(t.at(10) == doctest::Approx(0.5));
  CHECK(t.at(11) == 1.0);
  CHECK_THROWS(t.at(12));
  CHECK(t.report().tk_over_k_monotone);

  const auto su = t.su_part(4);
  const auto sd = t.sd_part(4);
  for (int k = 1; k <= 10; ++k) {
    CHECK(su.at(k) == std::min(t.at(k), t.at(4)));
    CHECK(sd.at(k) == std::max(t.at(k), t.at(4)));
  }
  CHECK(t.su_part(10) == t);
  CHECK(t.sd_part(1) == t);
  CHECK_THROWS(t.su_part(0));
  CHECK_THROWS(t.sd_part(11));
}

TEST_CASE("threshold validation") {
  CHECK_THROWS(ThresholdCollection(std::vector<double>{}));
  CHECK_THROWS(ThresholdCollection(std::vector<double>{0.2, 0.1}));
  CHECK_THROWS(ThresholdCollection(std::vector<double>{0.2, 1.1}));
  CHECK_NOTHROW(ThresholdCollection(std::vector<double>{0.3}));
  CHECK_NOTHROW(ThresholdCollection(std::vector<double>{0.0, 0.0, 1.0}));

  const std::vector<double> bumpy = {0.1, 0.1, 0.1};
  const auto r = validate(bumpy);
  CHECK(r.monotone);
  CHECK_FALSE(r.tk_over_k_monotone);
  const std::vector<double> down = {0.3, 0.2};
  CHECK_FALSE(validate(down).monotone);
}

TEST_CASE("csv export") {
  const ThresholdCollection t(std::vector<double>{0.25, 0.5});
  std::ostringstream os;
  t.write_csv(os);
  CHECK(os.str() == "k,t_k\n1,0.25\n2,0.5\n");
}
