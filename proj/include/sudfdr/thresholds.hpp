#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sudfdr {

enum class CurveKind { Linear, Aorc, Custom };

/// Result of the grid checks on a critical value function rho.
struct CurveReport {
  bool in_unit_interval = true;
  bool monotone = true;          // rho nondecreasing on [0,1]
  bool ratio_monotone = true;    // u -> rho(u)/u nondecreasing on (0,1]
  std::string diagnostic;

  bool ok() const { return in_unit_interval && monotone && ratio_monotone; }
};

/// Critical value function rho: [0,1] -> [0,1]; threshold collections are
/// built as t_k = rho(k/m).
class CriticalValueFunction {
 public:
  static CriticalValueFunction linear(double alpha);
  /// rho(u) = alpha u / (1 - u (1 - alpha)), with rho(1) = 1.
  static CriticalValueFunction aorc(double alpha);
  static CriticalValueFunction custom(std::function<double(double)> rho, std::string name = "custom");

  double operator()(double u) const;

  /// Rejection curve rho^{-1}. Only available for the linear and AORC curves.
  double inverse(double t) const;

  CurveKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::string& name() const { return name_; }

  CurveReport check(int grid_points = 10000, double tol = 1e-12) const;

 private:
  CriticalValueFunction(CurveKind kind, double alpha, std::function<double(double)> eval, std::string name);

  CurveKind kind_;
  double alpha_;
  std::function<double(double)> eval_;
  std::string name_;
};

struct ValidationReport {
  bool in_unit_interval = true;
  bool monotone = true;
  bool tk_over_k_monotone = true;
};

ValidationReport validate(std::span<const double> t, double tol = 1e-12);

/// Nondecreasing critical values (t_1, ..., t_m) in [0,1]. Indexing through
/// at() is 1-based, with the conventions t_0 = 0 and t_{m+1} = 1.
class ThresholdCollection {
 public:
  explicit ThresholdCollection(std::vector<double> t);

  static ThresholdCollection from_rho(const CriticalValueFunction& rho, int m);

  int m() const { return static_cast<int>(t_.size()); }
  double at(int k) const;
  std::span<const double> values() const { return t_; }

  ValidationReport report() const { return validate(t_); }

  /// (t_lambda ^ t_j)_j, the step-up half of a step-up-down procedure.
  ThresholdCollection su_part(int lambda) const;
  /// (t_lambda v t_j)_j, the step-down half.
  ThresholdCollection sd_part(int lambda) const;

  void write_csv(std::ostream& os) const;

  bool operator==(const ThresholdCollection&) const = default;

 private:
  std::vector<double> t_;
};

}  // namespace sudfdr
