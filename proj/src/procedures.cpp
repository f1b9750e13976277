#include "sudfdr/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sudfdr {

namespace {

void require_sizes(std::span<const double> p, const ThresholdCollection& t, int lambda) {
  if (static_cast<int>(p.size()) != t.m()) throw std::invalid_argument("p-value family and thresholds disagree on m");
  if (lambda < 1 || lambda > t.m()) throw std::out_of_range("lambda must lie in [1, m]");
}

}  // namespace

int sud_khat_sorted(std::span<const double> sorted_p, const ThresholdCollection& t, int lambda) {
  require_sizes(sorted_p, t, lambda);
  const int m = t.m();
  const auto values = t.values();
  if (sorted_p[lambda - 1] <= values[lambda - 1]) {
    // Step-down from lambda: extend while p_(k+1) <= t_{k+1}.
    int k = lambda;
    while (k < m && sorted_p[k] <= values[k]) ++k;
    return k;
  }
  // Step-up below lambda.
  for (int k = lambda - 1; k >= 1; --k) {
    if (sorted_p[k - 1] <= values[k - 1]) return k;
  }
  return 0;
}

int step_up_count(std::span<const double> sorted_p, const ThresholdCollection& t) {
  return sud_khat_sorted(sorted_p, t, t.m());
}

int step_down_count(std::span<const double> sorted_p, const ThresholdCollection& t) {
  if (static_cast<int>(sorted_p.size()) != t.m()) throw std::invalid_argument("p-value family and thresholds disagree on m");
  const auto values = t.values();
  int k = 0;
  while (k < t.m() && sorted_p[k] <= values[k]) ++k;
  return k;
}

SudOutcome sud_khat(std::span<const double> p, const ThresholdCollection& t, int lambda, int m0) {
  require_sizes(p, t, lambda);
  if (m0 < 0 || m0 > t.m()) throw std::invalid_argument("m0 must lie in [0, m]");
  std::vector<double> sorted(p.begin(), p.end());
  std::stable_sort(sorted.begin(), sorted.end());

  SudOutcome out;
  out.k_hat = sud_khat_sorted(sorted, t, lambda);
  if (out.k_hat > 0) {
    const double cut = t.at(out.k_hat);
    for (int i = 0; i < t.m(); ++i) {
      if (p[i] <= cut) out.rejected.push_back(i);
    }
  }
  out.fdp = fdp(out, m0);
  out.false_rejections = static_cast<int>(
      std::count_if(out.rejected.begin(), out.rejected.end(), [m0](int i) { return i < m0; }));
  return out;
}

double fdp(const SudOutcome& outcome, int m0) {
  const auto v = std::count_if(outcome.rejected.begin(), outcome.rejected.end(), [m0](int i) { return i < m0; });
  const auto r = std::max<std::size_t>(outcome.rejected.size(), 1);
  return static_cast<double>(v) / static_cast<double>(r);
}

EmpiricalCdf::EmpiricalCdf(std::span<const double> p) : sorted_(p.begin(), p.end()) {
  if (sorted_.empty()) throw std::invalid_argument("empirical c.d.f. of an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
  return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

namespace {

double lattice_fixed_point(double tau, const std::function<double(double)>& G, const CriticalValueFunction& rho,
                           const FixedPointOptions& opts) {
  const int n = opts.lattice;
  const auto start = static_cast<int>(std::lround(tau * n));
  if (std::abs(start - tau * n) > 1e-9) throw std::invalid_argument("lattice mode requires tau on the lattice");
  auto u_at = [n](int i) { return static_cast<double>(i) / n; };
  auto g_at = [&](int i) { return G(rho(u_at(i))); };
  if (g_at(start) >= u_at(start) - opts.tol) {
    for (int i = start; i <= n; ++i) {
      if (g_at(i) <= u_at(i) + opts.tol) return u_at(i);
    }
    return 1.0;
  }
  for (int i = start; i >= 0; --i) {
    if (g_at(i) >= u_at(i) - opts.tol) return u_at(i);
  }
  return 0.0;
}

double smooth_fixed_point(double tau, const std::function<double(double)>& G, const CriticalValueFunction& rho,
                          const FixedPointOptions& opts) {
  auto f = [&](double u) { return G(rho(u)) - u; };
  const int steps = std::max(opts.scan_points, 1);
  if (f(tau) >= 0.0) {
    if (f(tau) <= 0.0) return tau;
    // First sign change of f at or above tau; f(1) <= 0 always.
    double lo = tau;
    double hi = 1.0;
    for (int i = 1; i <= steps; ++i) {
      const double u = i == steps ? 1.0 : tau + (1.0 - tau) * i / steps;
      if (f(u) <= 0.0) {
        hi = u;
        break;
      }
      lo = u;
    }
    while (hi - lo > opts.tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (f(mid) <= 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }
  // Last point at or below tau where f >= 0; f(0) >= 0 always.
  double hi = tau;
  double lo = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double u = i == steps ? 0.0 : tau - tau * i / steps;
    if (f(u) >= 0.0) {
      lo = u;
      break;
    }
    hi = u;
  }
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

double u_operator(double tau, const std::function<double(double)>& G, const CriticalValueFunction& rho,
                  const FixedPointOptions& opts) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("u_operator requires tau in [0,1]");
  if (opts.lattice > 0) return lattice_fixed_point(tau, G, rho, opts);
  return smooth_fixed_point(tau, G, rho, opts);
}

SandwichCheck check_sandwich(std::span<const double> p, const CriticalValueFunction& rho, int lambda) {
  const int m = static_cast<int>(p.size());
  const ThresholdCollection t = ThresholdCollection::from_rho(rho, m);
  const EmpiricalCdf ecdf(p);
  const int k_hat = sud_khat_sorted(ecdf.sorted(), t, lambda);

  const double tau = static_cast<double>(lambda) / m;
  const double inv_m = 1.0 / m;
  FixedPointOptions opts;
  opts.lattice = m;

  SandwichCheck out;
  out.step_down_branch = ecdf.sorted()[lambda - 1] <= t.at(lambda);
  out.khat_over_m = static_cast<double>(k_hat) / m;
  out.lower = u_operator(tau, [&ecdf](double x) { return ecdf(x); }, rho, opts);
  out.upper = u_operator(tau, [&ecdf, inv_m](double x) { return std::min(ecdf(x) + inv_m, 1.0); }, rho, opts);
  constexpr double slack = 1e-12;
  out.holds = out.lower <= out.khat_over_m + slack && out.khat_over_m <= out.upper + slack;
  return out;
}

}  // namespace sudfdr
