#include "sudfdr/steck.hpp"

#include <vector>

namespace sudfdr {

namespace {

template <class Real>
std::vector<Real> convert(std::span<const double> t) {
  std::vector<Real> out;
  out.reserve(t.size());
  for (double v : t) out.push_back(detail::from_double<Real>(v));
  return out;
}

template <class Real>
double psi_impl(std::span<const double> t) {
  const auto tr = convert<Real>(t);
  const OnePopulationTable<Real> table(tr);
  return detail::to_double(table(table.size()));
}

template <class Real>
double psi_two_pop_impl(std::span<const double> t, int k0, const AlternativeCdf& F) {
  const auto tr = convert<Real>(t);
  std::vector<Real> f;
  f.reserve(tr.size());
  for (const auto& v : tr) f.push_back(detail::alt_cdf(F, v));
  const int k = static_cast<int>(t.size());
  const TwoPopulationTable<Real> table(tr, f, k0, k - k0);
  return detail::to_double(table(k, k0));
}

}  // namespace

double psi(std::span<const double> t, Precision precision) {
  if (precision == Precision::Rational) return psi_impl<mpq_class>(t);
  return psi_impl<double>(t);
}

double psi_two_pop(std::span<const double> t, int k0, const AlternativeCdf& F, Precision precision) {
  const int k = static_cast<int>(t.size());
  if (k0 < 0 || k0 > k) throw std::invalid_argument("psi_two_pop requires 0 <= k0 <= k");
  if (!F.continuous()) throw std::invalid_argument("psi_two_pop requires a continuous alternative");
  if (precision == Precision::Rational) return psi_two_pop_impl<mpq_class>(t, k0, F);
  return psi_two_pop_impl<double>(t, k0, F);
}

}  // namespace sudfdr
