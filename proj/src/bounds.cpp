#include "sudfdr/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sudfdr/procedures.hpp"

namespace sudfdr {

namespace {

double positive(double x) { return x > 0.0 ? x : 0.0; }

void require_inputs(const BoundInputs& in) {
  if (!(in.zeta > 0.0 && in.zeta < 1.0)) throw std::invalid_argument("zeta must lie in (0,1)");
  if (!(in.delta >= 0.0 && in.delta < 1.0)) throw std::invalid_argument("delta must lie in [0,1)");
  if (in.m < 1) throw std::invalid_argument("m must be positive");
  if (!(in.kappa >= 0.0 && in.kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0,1]");
  if (in.rho.kind() == CurveKind::Custom) {
    const CurveReport report = in.rho.check();
    if (!report.ok()) {
      throw std::invalid_argument("bound requires a nondecreasing rho with rho(u)/u nondecreasing: " +
                                  report.diagnostic);
    }
  }
}

}  // namespace

double du_cdf(double zeta, double x) { return (1.0 - zeta) + zeta * x; }

FixedPointPair u_plus_minus(const BoundInputs& in) {
  require_inputs(in);
  const double zeta = in.zeta;
  const double delta = in.delta;
  FixedPointPair out;
  out.u_plus = u_operator(in.kappa, [=](double x) { return std::min(du_cdf(zeta, x) + delta, 1.0); }, in.rho);
  out.u_minus = u_operator(in.kappa, [=](double x) { return std::max(du_cdf(zeta, x) - delta, 0.0); }, in.rho);
  return out;
}

namespace {

double epsilon_from(const BoundInputs& in, const FixedPointPair& u, double y) {
  const double first = (in.rho(u.u_plus) - in.rho(u.u_minus)) / u.u_plus;
  const double slack = positive(in.delta - y - 1.0 / in.m);
  const double exponent = -2.0 * in.m * slack * slack * positive(1.0 - y / in.zeta);
  return first + 4.0 / (1.0 - in.zeta) * std::exp(exponent);
}

}  // namespace

double epsilon_remainder(const BoundInputs& in, double y) {
  const FixedPointPair u = u_plus_minus(in);
  return epsilon_from(in, u, y);
}

double fm_nu(int m, int m0, double zeta) {
  const double a = std::abs(static_cast<double>(m0 - 1) / m - zeta);
  const double b = std::abs(static_cast<double>(m0) / m - zeta);
  return std::max(a, b);
}

BoundResult gap_bound_fm(const BoundInputs& in, int m0) {
  if (m0 <= 0 || m0 >= in.m) throw std::invalid_argument("FM bound requires 0 < m0 < m");
  const FixedPointPair u = u_plus_minus(in);
  BoundResult r;
  r.branch = ModelKind::FM;
  r.u_minus = u.u_minus;
  r.u_plus = u.u_plus;
  r.y = fm_nu(in.m, m0, in.zeta);
  r.epsilon = epsilon_from(in, u, r.y);
  r.gap_bound = static_cast<double>(m0) / in.m * r.epsilon;
  r.vacuous = r.gap_bound >= 1.0;
  return r;
}

BoundResult gap_bound_rm(const BoundInputs& in, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0,1)");
  const FixedPointPair u = u_plus_minus(in);
  BoundResult r;
  r.branch = ModelKind::RM;
  r.u_minus = u.u_minus;
  r.u_plus = u.u_plus;
  r.y = gamma;
  r.epsilon = epsilon_from(in, u, gamma);
  const double slack = positive(gamma - 1.0 / in.m);
  r.gap_bound = in.zeta * r.epsilon + 4.0 * std::exp(-2.0 * in.m * slack * slack);
  r.vacuous = r.gap_bound >= 1.0;
  return r;
}

double rm_gamma_rule(int m) {
  if (m < 2) throw std::invalid_argument("gamma rule needs m >= 2");
  return 1.0 / m + std::sqrt(std::log(2.0 * m) / (2.0 * m));
}

namespace {

// delta with 2 (1 - y/zeta) (delta - y - 1/m)^2 = log(m)/m.
double analytic_delta(double y, double zeta, int m) {
  const double shrink = 1.0 - y / zeta;
  if (!(shrink > 0.0)) throw std::invalid_argument("no feasible delta: y >= zeta");
  return y + 1.0 / m + std::sqrt(std::log(static_cast<double>(m)) / (2.0 * m * shrink));
}

template <class Eval>
DeltaChoice choose_delta(double delta, double y, int grid_points, Eval eval) {
  if (!(delta > y && delta < 1.0)) throw std::invalid_argument("no feasible delta in (y, 1)");
  DeltaChoice out;
  out.delta = delta;
  out.bound = eval(delta);
  out.grid_delta = delta;
  out.grid_bound = out.bound;
  for (int i = 1; i < grid_points; ++i) {
    const double d = y + (1.0 - y) * i / grid_points;
    const BoundResult b = eval(d);
    if (b.gap_bound < out.grid_bound.gap_bound) {
      out.grid_bound = b;
      out.grid_delta = d;
    }
  }
  return out;
}

}  // namespace

DeltaChoice optimize_delta_fm(const CriticalValueFunction& rho, double zeta, int m, double kappa, int m0,
                              int grid_points) {
  const double nu = fm_nu(m, m0, zeta);
  const double delta = analytic_delta(nu, zeta, m);
  return choose_delta(delta, nu, grid_points, [&](double d) {
    return gap_bound_fm(BoundInputs{rho, zeta, d, m, kappa}, m0);
  });
}

DeltaChoice optimize_delta_rm(const CriticalValueFunction& rho, double zeta, int m, double kappa,
                              int grid_points) {
  const double gamma = rm_gamma_rule(m);
  const double delta = analytic_delta(gamma, zeta, m);
  return choose_delta(delta, gamma, grid_points, [&](double d) {
    return gap_bound_rm(BoundInputs{rho, zeta, d, m, kappa}, gamma);
  });
}

double aorc_v_delta(double alpha, double zeta, double delta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(zeta > alpha && zeta < 1.0)) throw std::invalid_argument("AORC bound analysis requires alpha < zeta < 1");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in [0,1)");
  // (1-zeta+delta) + zeta rho(u) = u, cleared of the AORC denominator:
  //   (1-alpha) u^2 - [(1-zeta+delta)(1-alpha) + 1 - zeta alpha] u + (1-zeta+delta) = 0.
  const double c0 = 1.0 - zeta + delta;
  const double a = 1.0 - alpha;
  const double b = -(c0 * (1.0 - alpha) + 1.0 - zeta * alpha);
  const double disc = b * b - 4.0 * a * c0;
  if (disc < 0.0) throw std::domain_error("no real fixed point for this delta");
  const double q = -0.5 * (b - std::sqrt(disc));  // b < 0: no cancellation
  const double larger = q / a;
  if (!(larger > 0.0 && larger <= 1.0)) throw std::domain_error("larger fixed point lies outside (0,1]");
  return larger;
}

bool aorc_gate(double alpha, double zeta, double delta, double kappa) {
  try {
    return kappa < aorc_v_delta(alpha, zeta, delta);
  } catch (const std::domain_error&) {
    return false;  // no fixed point below 1: the assumption cannot hold
  }
}

}  // namespace sudfdr
