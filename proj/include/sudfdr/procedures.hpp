#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sudfdr/thresholds.hpp"

namespace sudfdr {

struct SudOutcome {
  int k_hat = 0;
  std::vector<int> rejected;  // 0-based indices with p_i <= t_{k_hat}
  int false_rejections = 0;   // rejected indices below m0
  double fdp = 0.0;
};

/// Number of rejections of SUD_lambda(t) given the p-values sorted ascending.
/// Uses p_(0) = 0 and t_0 = 0.
int sud_khat_sorted(std::span<const double> sorted_p, const ThresholdCollection& t, int lambda);

/// Pure step-up: max{k : p_(k) <= t_k}.
int step_up_count(std::span<const double> sorted_p, const ThresholdCollection& t);
/// Pure step-down: max{k : p_(k') <= t_k' for all k' <= k}.
int step_down_count(std::span<const double> sorted_p, const ThresholdCollection& t);

/// Evaluate SUD_lambda(t) on the family p; nulls are the indices 0..m0-1.
SudOutcome sud_khat(std::span<const double> p, const ThresholdCollection& t, int lambda, int m0 = 0);

/// False discovery proportion of an outcome with nulls 0..m0-1.
double fdp(const SudOutcome& outcome, int m0);

/// x -> m^{-1} #{i : p_i <= x}.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> p);

  double operator()(double x) const;
  int m() const { return static_cast<int>(sorted_.size()); }
  std::span<const double> sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

struct FixedPointOptions {
  /// When > 0, G o rho is a step function with values on the lattice
  /// {0, 1/lattice, ..., 1} and tau is a lattice point; the operator is then
  /// evaluated exactly by scanning the lattice.
  int lattice = 0;
  int scan_points = 4096;
  double tol = 1e-12;
};

/// Continuous step-up-down operator:
///   G(rho(tau)) >= tau:  min{u in [tau,1] : G(rho(u)) <= u}
///   otherwise:           max{u in [0,tau] : G(rho(u)) >= u}
double u_operator(double tau, const std::function<double(double)>& G, const CriticalValueFunction& rho,
                  const FixedPointOptions& opts = {});

struct SandwichCheck {
  double lower = 0.0;       // U(lambda/m, G_m)
  double khat_over_m = 0.0;
  double upper = 0.0;       // U(lambda/m, (G_m + 1/m) ^ 1)
  bool step_down_branch = false;
  bool holds = false;
};

/// Check U(lambda/m, G_m) <= k_hat/m <= U(lambda/m, (G_m + 1/m) ^ 1) for the
/// thresholds t_k = rho(k/m), m = |p|.
SandwichCheck check_sandwich(std::span<const double> p, const CriticalValueFunction& rho, int lambda);

}  // namespace sudfdr
