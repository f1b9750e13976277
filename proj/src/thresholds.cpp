#include "sudfdr/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sudfdr {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
}

}  // namespace

CriticalValueFunction::CriticalValueFunction(CurveKind kind, double alpha,
                                             std::function<double(double)> eval,
                                             std::string name)
    : kind_(kind), alpha_(alpha), eval_(std::move(eval)), name_(std::move(name)) {}

CriticalValueFunction CriticalValueFunction::linear(double alpha) {
  require_alpha(alpha);
  return {CurveKind::Linear, alpha, [alpha](double u) { return alpha * u; }, "linear"};
}

CriticalValueFunction CriticalValueFunction::aorc(double alpha) {
  require_alpha(alpha);
  // Denominator written as alpha + (1 - u)(1 - alpha) so that u = 1 gives
  // alpha / alpha = 1 exactly; 1 - u (1 - alpha) can round below alpha.
  return {CurveKind::Aorc, alpha,
          [alpha](double u) { return std::min(1.0, alpha * u / (alpha + (1.0 - u) * (1.0 - alpha))); }, "aorc"};
}

CriticalValueFunction CriticalValueFunction::custom(std::function<double(double)> rho,
                                                    std::string name) {
  if (!rho) throw std::invalid_argument("custom critical value function is empty");
  return {CurveKind::Custom, 0.0, std::move(rho), std::move(name)};
}

double CriticalValueFunction::operator()(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("rho evaluated outside [0,1]");
  return eval_(u);
}

double CriticalValueFunction::inverse(double t) const {
  switch (kind_) {
    case CurveKind::Linear:
      return t / alpha_;
    case CurveKind::Aorc:
      return t / (alpha_ + t * (1.0 - alpha_));
    case CurveKind::Custom:
      break;
  }
  throw std::logic_error("inverse is only defined for the linear and AORC curves");
}

CurveReport CriticalValueFunction::check(int grid_points, double tol) const {
  if (grid_points < 2) throw std::invalid_argument("grid needs at least two points");
  CurveReport report;
  std::ostringstream diag;
  double prev_value = eval_(0.0);
  double prev_ratio = -1.0;
  if (prev_value < -tol || prev_value > 1.0 + tol) report.in_unit_interval = false;
  for (int i = 1; i <= grid_points; ++i) {
    const double u = static_cast<double>(i) / grid_points;
    const double v = eval_(u);
    if (v < -tol || v > 1.0 + tol) {
      if (report.in_unit_interval) diag << "rho(" << u << ")=" << v << " outside [0,1]; ";
      report.in_unit_interval = false;
    }
    if (v < prev_value - tol) {
      if (report.monotone) diag << "rho decreases at u=" << u << "; ";
      report.monotone = false;
    }
    const double ratio = v / u;
    if (prev_ratio >= 0.0 && ratio < prev_ratio - tol) {
      if (report.ratio_monotone) diag << "rho(u)/u decreases at u=" << u << "; ";
      report.ratio_monotone = false;
    }
    prev_value = v;
    prev_ratio = ratio;
  }
  report.diagnostic = diag.str();
  return report;
}

ValidationReport validate(std::span<const double> t, double tol) {
  ValidationReport r;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= 0.0 && t[i] <= 1.0)) r.in_unit_interval = false;
    if (i > 0) {
      if (t[i] < t[i - 1] - tol) r.monotone = false;
      const double cur = t[i] / static_cast<double>(i + 1);
      const double prev = t[i - 1] / static_cast<double>(i);
      if (cur < prev - tol) r.tk_over_k_monotone = false;
    }
  }
  return r;
}

ThresholdCollection::ThresholdCollection(std::vector<double> t) : t_(std::move(t)) {
  if (t_.empty()) throw std::invalid_argument("threshold collection is empty");
  const auto r = validate(t_, 0.0);
  if (!r.in_unit_interval) throw std::invalid_argument("thresholds must lie in [0,1]");
  if (!r.monotone) throw std::invalid_argument("thresholds must be nondecreasing");
}

ThresholdCollection ThresholdCollection::from_rho(const CriticalValueFunction& rho, int m) {
  if (m < 1) throw std::invalid_argument("from_rho requires m >= 1");
  std::vector<double> t(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) t[k - 1] = rho(static_cast<double>(k) / m);
  // Guard against a custom rho that wobbles at the ulp level.
  for (int k = 1; k < m; ++k) t[k] = std::max(t[k], t[k - 1]);
  return ThresholdCollection(std::move(t));
}

double ThresholdCollection::at(int k) const {
  if (k == 0) return 0.0;
  if (k == m() + 1) return 1.0;
  if (k < 0 || k > m()) throw std::out_of_range("threshold index out of range");
  return t_[static_cast<std::size_t>(k - 1)];
}

ThresholdCollection ThresholdCollection::su_part(int lambda) const {
  if (lambda < 1 || lambda > m()) throw std::out_of_range("lambda must lie in [1, m]");
  const double cap = at(lambda);
  std::vector<double> out(t_);
  for (auto& v : out) v = std::min(v, cap);
  return ThresholdCollection(std::move(out));
}

ThresholdCollection ThresholdCollection::sd_part(int lambda) const {
  if (lambda < 1 || lambda > m()) throw std::out_of_range("lambda must lie in [1, m]");
  const double floor = at(lambda);
  std::vector<double> out(t_);
  for (auto& v : out) v = std::max(v, floor);
  return ThresholdCollection(std::move(out));
}

void ThresholdCollection::write_csv(std::ostream& os) const {
  os << "k,t_k\n";
  const auto prec = os.precision(17);
  for (int k = 1; k <= m(); ++k) os << k << ',' << at(k) << '\n';
  os.precision(prec);
}

}  // namespace sudfdr
