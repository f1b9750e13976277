#pragma once

// Boundary non-crossing probabilities of order statistics.
//
//   Psi_k(t_1..t_k)             = P(U_(1) <= t_1, ..., U_(k) <= t_k), U_i iid U(0,1)
//   Psi_{k,k0,F}(t_1..t_k)      = same event when k0 of the variables are U(0,1)
//                                 and k - k0 are iid with c.d.f. F
//
// Both are filled bottom-up by Steck-type recursions. A table holds every
// prefix value for one threshold sequence, so the O(n^4) cost of the
// two-population recursion is paid once per (thresholds, F) pair.

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sudfdr/detail/scalar.hpp"
#include "sudfdr/models.hpp"

namespace sudfdr {

enum class Precision { Double, Rational };

/// Raised when a recursion value leaves [0,1] by more than the tripwire,
/// i.e. double precision is exhausted for this input.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values that drift below 0 or above 1 by more than this fail loudly.
inline constexpr double kPsiTripwire = 1e-6;

namespace detail {

template <class Real>
class BinomialTable {
 public:
  explicit BinomialTable(int n) : n_(n), c_(static_cast<std::size_t>((n + 1) * (n + 1)), Real(0)) {
    for (int i = 0; i <= n; ++i) {
      at(i, 0) = Real(1);
      for (int j = 1; j <= i; ++j) at(i, j) = at(i - 1, j - 1) + (j <= i - 1 ? at(i - 1, j) : Real(0));
    }
  }
  const Real& operator()(int n, int k) const { return c_[static_cast<std::size_t>(n * (n_ + 1) + k)]; }

 private:
  Real& at(int n, int k) { return c_[static_cast<std::size_t>(n * (n_ + 1) + k)]; }
  int n_;
  std::vector<Real> c_;
};

/// Clamp to [0,1] and record how far outside the raw value was.
template <class Real>
Real settle(const Real& raw, double& min_raw, double& max_raw) {
  const double d = to_double(raw);
  min_raw = std::min(min_raw, d);
  max_raw = std::max(max_raw, d);
  if (d < -kPsiTripwire || d > 1.0 + kPsiTripwire) {
    throw PrecisionError("boundary-crossing recursion left [0,1] (value " + std::to_string(d) +
                         "); double precision exhausted");
  }
  if (raw < Real(0)) return Real(0);
  if (raw > Real(1)) return Real(1);
  return raw;
}

template <class Real>
void require_thresholds(std::span<const Real> t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < Real(0) || t[i] > Real(1)) throw std::invalid_argument("thresholds must lie in [0,1]");
    if (i > 0 && t[i] < t[i - 1]) throw std::invalid_argument("thresholds must be nondecreasing");
  }
}

}  // namespace detail

/// Psi_j(t_1..t_j) for j = 0..n via the classical one-population recursion
///   Psi_k = t_k^k - sum_{j=0}^{k-2} C(k,j) (t_k - t_{j+1})^{k-j} Psi_j.
template <class Real>
class OnePopulationTable {
 public:
  explicit OnePopulationTable(std::span<const Real> t) : psi_(t.size() + 1, Real(0)) {
    detail::require_thresholds(t);
    const int n = static_cast<int>(t.size());
    const detail::BinomialTable<Real> binom(n);
    psi_[0] = Real(1);
    for (int k = 1; k <= n; ++k) {
      const Real& tk = t[k - 1];
      detail::Accumulator<Real> acc;
      acc.add(detail::ipow(tk, k));
      for (int j = 0; j <= k - 2; ++j) {
        if (psi_[j] == Real(0)) continue;
        const Real gap = tk - t[j];
        acc.add(-(binom(k, j) * detail::ipow(gap, k - j) * psi_[j]));
      }
      psi_[k] = detail::settle(acc.value(), min_raw_, max_raw_);
    }
  }

  int size() const { return static_cast<int>(psi_.size()) - 1; }
  const Real& operator()(int k) const { return psi_.at(static_cast<std::size_t>(k)); }
  double min_raw() const { return min_raw_; }
  double max_raw() const { return max_raw_; }

 private:
  std::vector<Real> psi_;
  double min_raw_ = std::numeric_limits<double>::infinity();
  double max_raw_ = -std::numeric_limits<double>::infinity();
};

/// Psi_{j,j0,F}(t_1..t_j) for all j <= n with j0 <= max_nulls and
/// j - j0 <= max_alts. `f` holds F(t_i) for each threshold.
///
/// Recursion, with 0^0 = 1:
///   Psi_{k,k0} = t_k^{k0} F(t_k)^{k-k0}
///     - sum_{j<=k-2} sum_{j0} C(k0,j0) C(k-k0,j-j0)
///         (t_k - t_{j+1})^{k0-j0} (F(t_k) - F(t_{j+1}))^{k-k0-j+j0} Psi_{j,j0}
template <class Real>
class TwoPopulationTable {
 public:
  TwoPopulationTable(std::span<const Real> t, std::span<const Real> f, int max_nulls, int max_alts)
      : n_(static_cast<int>(t.size())),
        max_nulls_(std::min(max_nulls, static_cast<int>(t.size()))),
        max_alts_(std::min(max_alts, static_cast<int>(t.size()))),
        psi_(static_cast<std::size_t>((n_ + 1) * (max_nulls_ + 1)), Real(0)) {
    if (t.size() != f.size()) throw std::invalid_argument("threshold and F-value lengths differ");
    if (max_nulls < 0 || max_alts < 0) throw std::invalid_argument("population caps must be >= 0");
    detail::require_thresholds(t);
    detail::require_thresholds(f);
    fill(t, f);
  }

  int size() const { return n_; }
  int max_nulls() const { return max_nulls_; }
  int max_alts() const { return max_alts_; }

  bool admissible(int k, int k0) const {
    return k >= 0 && k <= n_ && k0 >= 0 && k0 <= k && k0 <= max_nulls_ && k - k0 <= max_alts_;
  }

  const Real& operator()(int k, int k0) const {
    if (!admissible(k, k0)) throw std::out_of_range("(k, k0) outside the filled table");
    return cell(k, k0);
  }

  double min_raw() const { return min_raw_; }
  double max_raw() const { return max_raw_; }

 private:
  Real& cell(int k, int k0) { return psi_[static_cast<std::size_t>(k * (max_nulls_ + 1) + k0)]; }
  const Real& cell(int k, int k0) const {
    return psi_[static_cast<std::size_t>(k * (max_nulls_ + 1) + k0)];
  }

  void fill(std::span<const Real> t, std::span<const Real> f) {
    const detail::BinomialTable<Real> binom(n_);
    cell(0, 0) = Real(1);
    // Powers of the gaps for the current level: gap_pow[j * (n+1) + e].
    std::vector<Real> t_pow(static_cast<std::size_t>(n_ * (n_ + 1)), Real(0));
    std::vector<Real> f_pow(static_cast<std::size_t>(n_ * (n_ + 1)), Real(0));
    const auto stride = static_cast<std::size_t>(n_ + 1);
    for (int k = 1; k <= n_; ++k) {
      const Real& tk = t[k - 1];
      const Real& fk = f[k - 1];
      for (int j = 0; j <= k - 2; ++j) {
        const Real dt = tk - t[j];
        const Real df = fk - f[j];
        Real* tp = &t_pow[j * stride];
        Real* fp = &f_pow[j * stride];
        tp[0] = Real(1);
        fp[0] = Real(1);
        for (int e = 1; e <= k; ++e) {
          tp[e] = tp[e - 1] * dt;
          fp[e] = fp[e - 1] * df;
        }
      }
      const int k0_lo = std::max(0, k - max_alts_);
      const int k0_hi = std::min(k, max_nulls_);
      for (int k0 = k0_lo; k0 <= k0_hi; ++k0) {
        const int k1 = k - k0;
        detail::Accumulator<Real> acc;
        acc.add(detail::ipow(tk, k0) * detail::ipow(fk, k1));
        for (int j = 0; j <= k - 2; ++j) {
          const Real* tp = &t_pow[j * stride];
          const Real* fp = &f_pow[j * stride];
          const int j0_lo = std::max(0, j - k1);
          const int j0_hi = std::min(j, k0);
          for (int j0 = j0_lo; j0 <= j0_hi; ++j0) {
            const Real& prev = cell(j, j0);
            if (prev == Real(0)) continue;
            const int e0 = k0 - j0;
            const int e1 = k1 - (j - j0);
            acc.add(-(binom(k0, j0) * binom(k1, j - j0) * tp[e0] * fp[e1] * prev));
          }
        }
        cell(k, k0) = detail::settle(acc.value(), min_raw_, max_raw_);
      }
    }
  }

  int n_;
  int max_nulls_;
  int max_alts_;
  std::vector<Real> psi_;
  double min_raw_ = std::numeric_limits<double>::infinity();
  double max_raw_ = -std::numeric_limits<double>::infinity();
};

/// Psi_k(t) for k = |t| uniforms.
double psi(std::span<const double> t, Precision precision = Precision::Double);

/// Psi_{k,k0,F}(t) with k = |t|. F must be continuous.
double psi_two_pop(std::span<const double> t, int k0, const AlternativeCdf& F,
                   Precision precision = Precision::Double);

}  // namespace sudfdr
