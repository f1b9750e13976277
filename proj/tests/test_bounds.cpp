#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "sudfdr/bounds.hpp"

using namespace sudfdr;

namespace {

const auto kLinear = CriticalValueFunction::linear(0.5);
const auto kAorc = CriticalValueFunction::aorc(0.2);

}  // namespace

TEST_CASE("linear fixed points in closed form") {
  const auto u = u_plus_minus(BoundInputs{kLinear, 0.7, 0.03, 100, 0.1});
  CHECK(u.u_minus == doctest::Approx(0.27 / 0.65).epsilon(1e-10));
  CHECK(u.u_plus == doctest::Approx(0.33 / 0.65).epsilon(1e-10));

  const auto same = u_plus_minus(BoundInputs{kLinear, 0.7, 0.0, 100, 0.1});
  CHECK(same.u_plus == doctest::Approx(same.u_minus).epsilon(1e-11));
  CHECK(same.u_plus == doctest::Approx(0.3 / 0.65).epsilon(1e-10));
}

// Roots of (1-alpha) u^2 - [(1-zeta+/-delta)(1-alpha) + 1 - zeta alpha] u + (1-zeta+/-delta)
// at 30 digits (mpmath).
TEST_CASE("AORC fixed points") {
  const auto u = u_plus_minus(BoundInputs{kAorc, 0.5, 0.03, 100, 0.5});
  CHECK(u.u_plus == doctest::Approx(0.678314712521643073384392621910944).epsilon(1e-10));
  CHECK(u.u_minus == doctest::Approx(0.577258655107629711877177636375884).epsilon(1e-10));
  // First-order expansions 0.625 +/- 0.05 hold up to O(delta^2).
  CHECK(std::abs(u.u_plus - 0.675) < 10 * 0.03 * 0.03);
  CHECK(std::abs(u.u_minus - 0.575) < 10 * 0.03 * 0.03);
}

TEST_CASE("AORC upper crossing") {
  CHECK(aorc_v_delta(0.2, 0.5, 0.01) == doctest::Approx(0.99301709318468101840626121081182).epsilon(1e-12));
  CHECK(aorc_v_delta(0.2, 0.5, 0.03) == doctest::Approx(0.976685287478356926615607378089328).epsilon(1e-12));
  CHECK(std::abs(aorc_v_delta(0.2, 0.5, 0.01) - (1.0 - 0.01 * 0.2 / 0.3)) <= 10 * 0.01 * 0.01);
  CHECK(aorc_v_delta(0.2, 0.5, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(aorc_v_delta(0.2, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(aorc_gate(0.2, 0.5, 0.01, 0.5));
  CHECK_FALSE(aorc_gate(0.2, 0.5, 0.03, 0.99));
  CHECK_THROWS_AS(aorc_v_delta(0.2, 0.5, 0.126), std::domain_error);
  CHECK_FALSE(aorc_gate(0.2, 0.5, 0.126, 0.01));
  CHECK_THROWS(aorc_v_delta(0.5, 0.5, 0.01));
  CHECK_THROWS(aorc_v_delta(0.5, 0.3, 0.01));
}

TEST_CASE("remainder term") {
  const BoundInputs in{kLinear, 0.7, 0.05, 10000, 0.5};
  const double y = 2.0 / 10000;
  const double um = 0.25 / 0.65;
  const double up = 0.35 / 0.65;
  const double slack = 0.05 - y - 1.0 / 10000;
  const double expected = 0.5 * (up - um) / up + 4.0 / 0.3 * std::exp(-2.0 * 10000 * slack * slack * (1.0 - y / 0.7));
  CHECK(epsilon_remainder(in, y) == doctest::Approx(expected).epsilon(1e-9));
  // Linear first term is at most 2 alpha delta / (1 - zeta + delta).
  CHECK(0.5 * (up - um) / up <= 2 * 0.5 * 0.05 / (0.3 + 0.05) + 1e-12);
  // delta <= y + 1/m: the exponential factor is exactly 1.
  const BoundInputs tight{kLinear, 0.7, 0.01, 100, 0.5};
  const auto u = u_plus_minus(tight);
  CHECK(epsilon_remainder(tight, 0.005) == doctest::Approx(0.5 * (u.u_plus - u.u_minus) / u.u_plus + 4.0 / 0.3));
  // Large m: only the fixed-point term survives.
  const BoundInputs huge{kLinear, 0.7, 0.05, 100000000, 0.5};
  CHECK(epsilon_remainder(huge, 1e-8) == doctest::Approx(0.5 * (up - um) / up).epsilon(1e-9));
}

TEST_CASE("FM and RM bounds") {
  CHECK(fm_nu(10000, 7002, 0.7) == doctest::Approx(2.0 / 10000).epsilon(1e-9));
  CHECK(fm_nu(10, 7, 0.7) == doctest::Approx(0.1));

  const BoundInputs in{kLinear, 0.7, 0.05, 10000, 0.5};
  const auto fm = gap_bound_fm(in, 7002);
  CHECK(fm.gap_bound > 0.0);
  CHECK(fm.gap_bound == doctest::Approx(0.7002 * epsilon_remainder(in, fm_nu(10000, 7002, 0.7))));
  CHECK(fm.branch == ModelKind::FM);
  CHECK_FALSE(fm.vacuous);

  const auto rm = gap_bound_rm(in, 0.025);
  const double hoeffding = 4.0 * std::exp(-2.0 * 10000 * std::pow(0.025 - 1e-4, 2));
  CHECK(rm.gap_bound == doctest::Approx(0.7 * epsilon_remainder(in, 0.025) + hoeffding));
  CHECK(rm.branch == ModelKind::RM);

  // No slack in the exponent: the bound is at least 4 pi0 / (1 - zeta), and flagged.
  const auto vac = gap_bound_rm(BoundInputs{kLinear, 0.7, 0.01, 100, 0.5}, 0.2);
  CHECK(vac.gap_bound >= 4 * 0.7 / 0.3);
  CHECK(vac.vacuous);

  CHECK_THROWS(gap_bound_fm(in, 0));
  CHECK_THROWS(gap_bound_fm(in, 10000));
  CHECK_THROWS(gap_bound_rm(in, 0.0));
  CHECK_THROWS(gap_bound_rm(in, 1.0));
}

TEST_CASE("bounds decrease with m along the analytic delta") {
  double prev = INFINITY;
  for (int m : {1000, 10000, 100000, 1000000}) {
    const int m0 = static_cast<int>(std::lround(0.7 * m));
    const auto c = optimize_delta_fm(kLinear, 0.7, m, 0.5, m0);
    CHECK(c.bound.gap_bound < prev);
    CHECK(c.grid_bound.gap_bound <= c.bound.gap_bound);
    // The analytic choice makes the concentration term exactly 4/(1-zeta) / m.
    const double y = fm_nu(m, m0, 0.7);
    const double slack = c.delta - y - 1.0 / m;
    CHECK(std::exp(-2.0 * m * slack * slack * (1 - y / 0.7)) == doctest::Approx(1.0 / m).epsilon(1e-9));
    prev = c.bound.gap_bound;
  }
  const auto rm = optimize_delta_rm(kLinear, 0.7, 10000, 0.5);
  CHECK(rm.grid_bound.gap_bound <= rm.bound.gap_bound);
  const double g = rm_gamma_rule(10000);
  CHECK(2 * std::exp(-2.0 * 10000 * std::pow(g - 1e-4, 2)) == doctest::Approx(1e-4).epsilon(1e-9));
}

TEST_CASE("fixed points bracket the Dirac-uniform one") {
  for (const auto& rho : {kLinear, kAorc}) {
    for (double zeta : {0.5, 0.7, 0.9}) {
      const double u_du = u_plus_minus(BoundInputs{rho, zeta, 0.0, 100, 0.3}).u_plus;
      for (double delta : {0.001, 0.01, 0.05}) {
        const auto u = u_plus_minus(BoundInputs{rho, zeta, delta, 100, 0.3});
        CHECK(u.u_minus <= u_du + 1e-12);
        CHECK(u_du <= u.u_plus + 1e-12);
        CHECK(u.u_plus >= 1 - zeta - 1e-12);
      }
    }
  }
}

TEST_CASE("epsilon is nonincreasing in m") {
  double prev = INFINITY;
  for (int m = 100; m <= 100000; m *= 2) {
    const double e = epsilon_remainder(BoundInputs{kLinear, 0.6, 0.05, m, 0.5}, 0.01);
    CHECK(e <= prev + 1e-15);
    prev = e;
  }
}

TEST_CASE("input checks") {
  const auto bad = CriticalValueFunction::custom([](double u) { return 0.5 * std::sqrt(u); });
  CHECK_THROWS(u_plus_minus(BoundInputs{bad, 0.7, 0.05, 100, 0.5}));
  CHECK_THROWS(u_plus_minus(BoundInputs{kLinear, 1.0, 0.05, 100, 0.5}));
  CHECK_THROWS(u_plus_minus(BoundInputs{kLinear, 0.7, -0.1, 100, 0.5}));
  CHECK_THROWS(u_plus_minus(BoundInputs{kLinear, 0.7, 0.05, 100, 1.5}));
  CHECK_THROWS(optimize_delta_fm(kLinear, 0.1, 10, 0.5, 9));
}
