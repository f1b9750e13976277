#pragma once

// Scalar plumbing shared by the recursion kernels: the same templates run in
// double precision and in exact rational arithmetic (GMP).

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "sudfdr/models.hpp"

namespace sudfdr::detail {

template <class Real>
inline constexpr bool is_floating_v = std::is_floating_point_v<Real>;

template <class Real>
Real from_double(double x) {
  if constexpr (is_floating_v<Real>) {
    return static_cast<Real>(x);
  } else {
    return Real(x);  // exact: every finite double is a dyadic rational
  }
}

template <class Real>
double to_double(const Real& x) {
  if constexpr (is_floating_v<Real>) {
    return static_cast<double>(x);
  } else {
    return x.get_d();
  }
}

/// x^e for integer e >= 0, with 0^0 = 1.
template <class Real>
Real ipow(const Real& x, int e) {
  if constexpr (is_floating_v<Real>) {
    if (e == 0) return Real(1);
    return std::pow(x, e);
  } else {
    Real result(1);
    Real base(x);
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }
}

/// Neumaier-compensated accumulator; plain summation for exact types.
template <class Real>
class Accumulator {
 public:
  void add(const Real& x) {
    if constexpr (is_floating_v<Real>) {
      const Real t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
      } else {
        comp_ += (x - t) + sum_;
      }
      sum_ = t;
    } else {
      sum_ += x;
    }
  }
  Real value() const {
    if constexpr (is_floating_v<Real>) {
      return sum_ + comp_;
    } else {
      return sum_;
    }
  }

 private:
  Real sum_{0};
  Real comp_{0};
};

/// F(t) in the requested arithmetic. The rational path supports the
/// alternatives whose c.d.f. is polynomial: Identity and DiracZero.
template <class Real>
Real alt_cdf(const AlternativeCdf& F, const Real& t) {
  if constexpr (is_floating_v<Real>) {
    return static_cast<Real>(F.cdf(static_cast<double>(t)));
  } else {
    switch (F.kind()) {
      case AltKind::Identity:
        return t;
      case AltKind::DiracZero:
        return Real(1);
      default:
        throw std::invalid_argument("exact-rational mode supports identity and dirac alternatives only");
    }
  }
}

/// 1 - F(1 - t) in the requested arithmetic.
template <class Real>
Real alt_reflected_cdf(const AlternativeCdf& F, const Real& t) {
  if constexpr (is_floating_v<Real>) {
    return static_cast<Real>(F.reflected_cdf(static_cast<double>(t)));
  } else {
    switch (F.kind()) {
      case AltKind::Identity:
        return t;
      case AltKind::DiracZero:
        return t >= 1 ? Real(1) : Real(0);
      default:
        throw std::invalid_argument("exact-rational mode supports identity and dirac alternatives only");
    }
  }
}

}  // namespace sudfdr::detail
