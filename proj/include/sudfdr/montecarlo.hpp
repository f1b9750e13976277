#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sudfdr/exact.hpp"
#include "sudfdr/models.hpp"
#include "sudfdr/thresholds.hpp"

namespace sudfdr {

struct BinEstimate {
  double mass = 0.0;
  double std_error = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  std::optional<double> std_error;  // absent when n == 1
  std::int64_t n_replicates = 0;
  std::uint64_t seed = 0;
  std::vector<BinEstimate> per_bin;
};

struct McOptions {
  /// 0 means std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned threads = 0;
};

/// Replicates per block; blocks are summed independently and reduced in a
/// fixed pairwise tree, so estimates are bit-identical for any thread count.
inline constexpr std::int64_t kReplicateBlock = 4096;

McEstimate simulate_fdr(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, std::int64_t n,
                        std::uint64_t seed, const McOptions& opts = {});

/// One FDP estimate per lambda, all computed from the same replicates.
std::vector<McEstimate> simulate_fdr_sweep(const ThresholdCollection& t, const std::vector<int>& lambdas,
                                           const MixtureConfig& cfg, std::int64_t n, std::uint64_t seed,
                                           const McOptions& opts = {});

/// Frequencies of FDP in the bins of fdp_pmf_histogram (bins + 1 entries).
McEstimate simulate_fdp_hist(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, std::int64_t n,
                             int bins, std::uint64_t seed, const McOptions& opts = {});

/// Frequency of {V >= k}, V the number of false rejections.
McEstimate simulate_kfwer(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, int k,
                          std::int64_t n, std::uint64_t seed, const McOptions& opts = {});

/// Counts of (|R|, |R intersect nulls|) for the pure step-up or step-down procedure.
struct JointCounts {
  int m = 0;
  std::int64_t n = 0;
  std::vector<std::int64_t> counts;  // (m+1) x (m+1), row k, column j
  std::int64_t operator()(int k, int j) const { return counts[static_cast<std::size_t>(k * (m + 1) + j)]; }
};

JointCounts simulate_joint(const ThresholdCollection& t, StepKind kind, const MixtureConfig& cfg, std::int64_t n,
                           std::uint64_t seed, const McOptions& opts = {});

struct VerdictReport {
  bool pass = false;
  double z = 0.0;
  std::string diagnostic;
};

/// Pass iff |exact - mc.mean| <= sigmas * mc.std_error.
VerdictReport cross_validate(double exact_value, const McEstimate& mc, double sigmas);

}  // namespace sudfdr
