#pragma once

namespace sudfdr::normal {

/// Standard normal upper tail P(Z >= z), computed through erfc so that the
/// far tails keep full relative accuracy.
double upper_tail(double z);

/// Standard normal lower tail P(Z <= z).
double lower_tail(double z);

/// Inverse of upper_tail on [0,1]; returns +inf at 0 and -inf at 1.
double upper_tail_inverse(double p);

}  // namespace sudfdr::normal
