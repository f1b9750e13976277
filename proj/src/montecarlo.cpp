#include "sudfdr/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sudfdr/procedures.hpp"
#include "sudfdr/rng.hpp"

namespace sudfdr {

namespace {

struct BlockStats {
  std::vector<double> sum;
  std::vector<double> sumsq;
  std::vector<std::int64_t> counts;

  BlockStats(std::size_t values, std::size_t n_counts) : sum(values, 0.0), sumsq(values, 0.0), counts(n_counts, 0) {}

  void merge(const BlockStats& other) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += other.sum[i];
      sumsq[i] += other.sumsq[i];
    }
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  }
};

/// Per-replicate scratch handed to the kernels.
struct Replicate {
  PValueSample sample;
  std::vector<double> sorted;
};

template <class Kernel>
BlockStats run_blocks(const MixtureConfig& cfg, std::int64_t n, std::uint64_t seed, const McOptions& opts,
                      std::size_t n_values, std::size_t n_counts, const Kernel& kernel) {
  if (n < 1) throw std::invalid_argument("Monte-Carlo needs n >= 1");
  const std::int64_t n_blocks = (n + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<BlockStats> blocks(static_cast<std::size_t>(n_blocks), BlockStats(n_values, n_counts));

  auto work = [&](std::int64_t first_block, std::int64_t stride) {
    Replicate rep;
    std::vector<double> values(n_values, 0.0);
    for (std::int64_t b = first_block; b < n_blocks; b += stride) {
      BlockStats& stats = blocks[static_cast<std::size_t>(b)];
      const std::int64_t lo = b * kReplicateBlock;
      const std::int64_t hi = std::min(n, lo + kReplicateBlock);
      for (std::int64_t r = lo; r < hi; ++r) {
        Xoshiro256 rng = Xoshiro256::stream(seed, static_cast<std::uint64_t>(r));
        sample_into(cfg, rng, rep.sample);
        rep.sorted.assign(rep.sample.p.begin(), rep.sample.p.end());
        std::sort(rep.sorted.begin(), rep.sorted.end());
        kernel(rep, values.data(), stats.counts.data());
        for (std::size_t i = 0; i < n_values; ++i) {
          stats.sum[i] += values[i];
          stats.sumsq[i] += values[i] * values[i];
        }
      }
    }
  };

  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, n_blocks));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work, static_cast<std::int64_t>(i), threads);
    for (auto& th : pool) th.join();
  }

  // Fixed pairwise tree over block order.
  for (std::size_t width = 1; width < blocks.size(); width *= 2) {
    for (std::size_t i = 0; i + width < blocks.size(); i += 2 * width) blocks[i].merge(blocks[i + width]);
  }
  return std::move(blocks.front());
}

/// Number of nulls (indices below m0) rejected at cut.
int false_rejections(const PValueSample& s, int k_hat, const ThresholdCollection& t) {
  if (k_hat == 0) return 0;
  const double cut = t.at(k_hat);
  int v = 0;
  for (int i = 0; i < s.m0_realized; ++i) v += s.p[i] <= cut ? 1 : 0;
  return v;
}

McEstimate make_estimate(double sum, double sumsq, std::int64_t n, std::uint64_t seed) {
  McEstimate e;
  e.n_replicates = n;
  e.seed = seed;
  const double nd = static_cast<double>(n);
  e.mean = sum / nd;
  if (n > 1) {
    const double var = std::max(0.0, (sumsq - nd * e.mean * e.mean) / (nd - 1.0));
    e.std_error = std::sqrt(var / nd);
  }
  return e;
}

void require_lambdas(const ThresholdCollection& t, const std::vector<int>& lambdas) {
  if (lambdas.empty()) throw std::invalid_argument("empty lambda set");
  for (int l : lambdas) {
    if (l < 1 || l > t.m()) throw std::out_of_range("lambda must lie in [1, m]");
  }
}

void require_match(const ThresholdCollection& t, const MixtureConfig& cfg) {
  if (t.m() != cfg.m()) throw std::invalid_argument("threshold collection and model disagree on m");
}

}  // namespace

std::vector<McEstimate> simulate_fdr_sweep(const ThresholdCollection& t, const std::vector<int>& lambdas,
                                           const MixtureConfig& cfg, std::int64_t n, std::uint64_t seed,
                                           const McOptions& opts) {
  require_match(t, cfg);
  require_lambdas(t, lambdas);
  const BlockStats stats = run_blocks(cfg, n, seed, opts, lambdas.size(), 0,
                                      [&](const Replicate& rep, double* values, std::int64_t*) {
                                        for (std::size_t i = 0; i < lambdas.size(); ++i) {
                                          const int k = sud_khat_sorted(rep.sorted, t, lambdas[i]);
                                          const int v = false_rejections(rep.sample, k, t);
                                          values[i] = k == 0 ? 0.0 : static_cast<double>(v) / k;
                                        }
                                      });
  std::vector<McEstimate> out;
  out.reserve(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) out.push_back(make_estimate(stats.sum[i], stats.sumsq[i], n, seed));
  return out;
}

McEstimate simulate_fdr(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, std::int64_t n,
                        std::uint64_t seed, const McOptions& opts) {
  return simulate_fdr_sweep(t, {lambda}, cfg, n, seed, opts).front();
}

McEstimate simulate_fdp_hist(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, std::int64_t n,
                             int bins, std::uint64_t seed, const McOptions& opts) {
  require_match(t, cfg);
  require_lambdas(t, {lambda});
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  const BlockStats stats = run_blocks(cfg, n, seed, opts, 1, static_cast<std::size_t>(bins + 1),
                                      [&](const Replicate& rep, double* values, std::int64_t* counts) {
                                        const int k = sud_khat_sorted(rep.sorted, t, lambda);
                                        const int v = false_rejections(rep.sample, k, t);
                                        values[0] = k == 0 ? 0.0 : static_cast<double>(v) / k;
                                        const int bin = k == 0 ? 0 : static_cast<int>((static_cast<long long>(v) * bins) / k);
                                        ++counts[bin];
                                      });
  McEstimate e = make_estimate(stats.sum[0], stats.sumsq[0], n, seed);
  const double nd = static_cast<double>(n);
  for (std::int64_t c : stats.counts) {
    const double p = static_cast<double>(c) / nd;
    e.per_bin.push_back({p, std::sqrt(p * (1.0 - p) / nd)});
  }
  return e;
}

McEstimate simulate_kfwer(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, int k,
                          std::int64_t n, std::uint64_t seed, const McOptions& opts) {
  require_match(t, cfg);
  require_lambdas(t, {lambda});
  if (k < 1) throw std::invalid_argument("k-FWER needs k >= 1");
  const BlockStats stats = run_blocks(cfg, n, seed, opts, 1, 0, [&](const Replicate& rep, double* values, std::int64_t*) {
    const int kh = sud_khat_sorted(rep.sorted, t, lambda);
    values[0] = false_rejections(rep.sample, kh, t) >= k ? 1.0 : 0.0;
  });
  return make_estimate(stats.sum[0], stats.sumsq[0], n, seed);
}

JointCounts simulate_joint(const ThresholdCollection& t, StepKind kind, const MixtureConfig& cfg, std::int64_t n,
                           std::uint64_t seed, const McOptions& opts) {
  require_match(t, cfg);
  const int m = t.m();
  const auto cells = static_cast<std::size_t>((m + 1) * (m + 1));
  const BlockStats stats = run_blocks(cfg, n, seed, opts, 0, cells, [&](const Replicate& rep, double*, std::int64_t* counts) {
    const int k = kind == StepKind::StepUp ? step_up_count(rep.sorted, t) : step_down_count(rep.sorted, t);
    const int v = false_rejections(rep.sample, k, t);
    ++counts[k * (m + 1) + v];
  });
  return JointCounts{m, n, stats.counts};
}

VerdictReport cross_validate(double exact_value, const McEstimate& mc, double sigmas) {
  if (!(sigmas > 0.0)) throw std::invalid_argument("sigmas must be positive");
  VerdictReport r;
  const double diff = exact_value - mc.mean;
  std::ostringstream os;
  os.precision(10);
  if (!mc.std_error || *mc.std_error == 0.0) {
    r.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    r.pass = std::abs(diff) <= 1e-12;
    os << "degenerate Monte-Carlo spread: exact=" << exact_value << " mc=" << mc.mean;
  } else {
    r.z = diff / *mc.std_error;
    r.pass = std::abs(diff) <= sigmas * *mc.std_error;
    os << "exact=" << exact_value << " mc=" << mc.mean << " se=" << *mc.std_error << " z=" << r.z;
  }
  if (!r.pass) os << " exceeds " << sigmas << " sigma";
  r.diagnostic = os.str();
  return r;
}

}  // namespace sudfdr
