#pragma once

#include <vector>

#include "sudfdr/models.hpp"
#include "sudfdr/steck.hpp"
#include "sudfdr/thresholds.hpp"

namespace sudfdr {

enum class StepKind { StepUp, StepDown };

/// P(|R| = k, |R intersect nulls| = j) on the triangle 0 <= j <= k <= m.
/// In the FM model only max(0, k-m+m0) <= j <= min(m0, k) can carry mass.
class JointPmf {
 public:
  JointPmf(int m, ModelKind model, int m0);

  int m() const { return m_; }
  ModelKind model() const { return model_; }
  int j_min(int k) const;
  int j_max(int k) const;

  /// Zero outside the index range.
  double operator()(int k, int j) const;
  void set(int k, int j, double value);

  double total() const;
  /// E[FDP] = sum_{k>=1} sum_j (j/k) P(k, j).
  double fdr() const;
  double fdr_over(int k_lo, int k_hi) const;

  /// Lowest raw value seen in the underlying recursions before clamping.
  double min_raw = 0.0;

 private:
  int m_;
  ModelKind model_;
  int m0_;
  std::vector<double> p_;
};

/// Joint distribution of (discoveries, false discoveries) for the pure
/// step-up or step-down procedure with thresholds `t`.
JointPmf joint_table(const ThresholdCollection& t, StepKind kind, const MixtureConfig& cfg,
                     Precision precision = Precision::Double);

// Single cells. Each call fills the recursion tables for `t`; use
// joint_table for more than a handful of cells.
double joint_su_rm(const ThresholdCollection& t, int k, int j, double pi0, const AlternativeCdf& F);
double joint_sd_rm(const ThresholdCollection& t, int k, int j, double pi0, const AlternativeCdf& F);
double joint_su_fm(const ThresholdCollection& t, int k, int j, int m0, const AlternativeCdf& F);
double joint_sd_fm(const ThresholdCollection& t, int k, int j, int m0, const AlternativeCdf& F);

/// Joint distribution for SUD_lambda(t): cells k < lambda come from the
/// step-up procedure on (t ^ t_lambda), cells k >= lambda from the step-down
/// procedure on (t v t_lambda).
JointPmf sud_joint(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg,
                   Precision precision = Precision::Double);

struct FdrResult {
  double fdr = 0.0;
  double su_part = 0.0;  // contribution of k < lambda
  double sd_part = 0.0;  // contribution of k >= lambda
};

FdrResult fdr_sud(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg,
                  Precision precision = Precision::Double);
FdrResult fdr_sud_fm(const ThresholdCollection& t, int lambda, int m0, const AlternativeCdf& F,
                     Precision precision = Precision::Double);
FdrResult fdr_sud_rm(const ThresholdCollection& t, int lambda, double pi0, const AlternativeCdf& F,
                     Precision precision = Precision::Double);

/// FDR of the pure step-up / step-down procedure, from its own joint table.
double fdr_pure(const ThresholdCollection& t, StepKind kind, const MixtureConfig& cfg,
                Precision precision = Precision::Double);

/// P(FDP(SUD_lambda(t)) <= x) for x in (0,1).
double fdp_cdf(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, double x);

/// Masses of FDP over [i/bins, (i+1)/bins) for i = 0..bins-1, followed by the
/// atom {FDP = 1}; bins + 1 entries in total. Bin 0 holds P(FDP = 0).
std::vector<double> fdp_pmf_histogram(const ThresholdCollection& t, int lambda,
                                      const MixtureConfig& cfg, int bins);
std::vector<double> fdp_pmf_histogram(const JointPmf& sud, int bins);

/// FM model with F(x) = 1{x >= 1} and thresholds (t0, ..., t0, 1).
struct ExtremeConfigFdr {
  double fdr_sud = 0.0;       // any lambda in 1..m-1
  double fdr_su = 0.0;        // lambda = m
  double crossover_t0 = 0.0;  // fdr_sud > fdr_su iff t0 exceeds this
};

ExtremeConfigFdr extreme_config_closed_forms(int m, int m0, double t0);
ThresholdCollection extreme_thresholds(int m, double t0);

}  // namespace sudfdr
