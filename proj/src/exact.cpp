#include "sudfdr/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sudfdr/detail/scalar.hpp"

namespace sudfdr {

JointPmf::JointPmf(int m, ModelKind model, int m0)
    : m_(m), model_(model), m0_(m0), p_(static_cast<std::size_t>((m + 1) * (m + 1)), 0.0) {
  if (model == ModelKind::FM && (m0 < 0 || m0 > m)) throw std::invalid_argument("m0 out of range");
}

int JointPmf::j_min(int k) const { return model_ == ModelKind::FM ? std::max(0, k - m_ + m0_) : 0; }

int JointPmf::j_max(int k) const { return model_ == ModelKind::FM ? std::min(m0_, k) : k; }

double JointPmf::operator()(int k, int j) const {
  if (k < 0 || k > m_ || j < j_min(k) || j > j_max(k)) return 0.0;
  return p_[static_cast<std::size_t>(k * (m_ + 1) + j)];
}

void JointPmf::set(int k, int j, double value) {
  if (k < 0 || k > m_ || j < j_min(k) || j > j_max(k)) throw std::out_of_range("(k, j) outside the pmf support");
  p_[static_cast<std::size_t>(k * (m_ + 1) + j)] = value;
}

double JointPmf::total() const {
  detail::Accumulator<double> acc;
  for (int k = 0; k <= m_; ++k) {
    for (int j = j_min(k); j <= j_max(k); ++j) acc.add((*this)(k, j));
  }
  return acc.value();
}

double JointPmf::fdr_over(int k_lo, int k_hi) const {
  detail::Accumulator<double> acc;
  for (int k = std::max(1, k_lo); k <= std::min(m_, k_hi); ++k) {
    for (int j = std::max(1, j_min(k)); j <= j_max(k); ++j) {
      acc.add(static_cast<double>(j) / k * (*this)(k, j));
    }
  }
  return acc.value();
}

double JointPmf::fdr() const { return fdr_over(1, m_); }

namespace {

void require_continuous(const AlternativeCdf& F) {
  if (!F.continuous()) {
    throw std::invalid_argument("exact formulas require a continuous alternative (step_at_one is not)");
  }
}

// Cell writer shared by the kernels: clamps tiny negative round-off.
struct Sink {
  JointPmf& out;
  int k_lo;
  int k_hi;
  bool wants(int k) const { return k >= k_lo && k <= k_hi; }
  void put(int k, int j, double v) { out.set(k, j, std::max(0.0, v)); }
};

template <class Real>
struct Thresholds {
  std::vector<Real> s;  // s[0] = t_0 = 0, s[1..m], s[m+1] = 1
  explicit Thresholds(const ThresholdCollection& t) {
    const int m = t.m();
    s.reserve(static_cast<std::size_t>(m + 2));
    for (int k = 0; k <= m + 1; ++k) s.push_back(detail::from_double<Real>(t.at(k)));
  }
};

template <class Real>
void fill_fm(const ThresholdCollection& t, StepKind kind, int m0, const AlternativeCdf& F, Sink sink) {
  const int m = t.m();
  const int m1 = m - m0;
  const Thresholds<Real> th(t);
  const auto& s = th.s;
  const detail::BinomialTable<Real> binom(m);

  if (kind == StepKind::StepUp) {
    // Psi_{m-k, m0-j, reflected F}(1 - s_m, ..., 1 - s_{k+1}).
    std::vector<Real> r(static_cast<std::size_t>(m));
    std::vector<Real> fr(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
      r[i - 1] = Real(1) - s[m + 1 - i];
      fr[i - 1] = detail::alt_reflected_cdf(F, r[i - 1]);
    }
    const TwoPopulationTable<Real> table(r, fr, m0, m1);
    sink.out.min_raw = std::min(sink.out.min_raw, table.min_raw());
    for (int k = 0; k <= m; ++k) {
      if (!sink.wants(k)) continue;
      const Real fk = k == 0 ? Real(0) : detail::alt_cdf(F, s[k]);
      for (int j = std::max(0, k - m1); j <= std::min(m0, k); ++j) {
        const Real pref = binom(m0, j) * binom(m1, k - j) * detail::ipow(s[k], j) * detail::ipow(fk, k - j);
        sink.put(k, j, detail::to_double(Real(pref * table(m - k, m0 - j))));
      }
    }
  } else {
    std::vector<Real> sv(s.begin() + 1, s.begin() + 1 + m);
    std::vector<Real> f(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) f[i] = detail::alt_cdf(F, sv[i]);
    const TwoPopulationTable<Real> table(sv, f, m0, m1);
    sink.out.min_raw = std::min(sink.out.min_raw, table.min_raw());
    for (int k = 0; k <= m; ++k) {
      if (!sink.wants(k)) continue;
      const Real next = s[k + 1];
      const Real f_next = k == m ? Real(1) : detail::alt_cdf(F, next);
      for (int j = std::max(0, k - m1); j <= std::min(m0, k); ++j) {
        const Real pref = binom(m0, j) * binom(m1, k - j) * detail::ipow(Real(Real(1) - next), m0 - j) *
                          detail::ipow(Real(Real(1) - f_next), m1 - k + j);
        sink.put(k, j, detail::to_double(Real(pref * table(k, j))));
      }
    }
  }
}

template <class Real>
void fill_rm(const ThresholdCollection& t, StepKind kind, double pi0_d, const AlternativeCdf& F, Sink sink) {
  const int m = t.m();
  const Thresholds<Real> th(t);
  const auto& s = th.s;
  const detail::BinomialTable<Real> binom(m);
  const Real pi0 = detail::from_double<Real>(pi0_d);
  const Real pi1 = Real(1) - pi0;
  auto G = [&](const Real& x, const Real& fx) { return Real(pi0 * x + pi1 * fx); };

  std::vector<Real> pi0_pow(static_cast<std::size_t>(m + 1));
  std::vector<Real> pi1_pow(static_cast<std::size_t>(m + 1));
  for (int e = 0; e <= m; ++e) {
    pi0_pow[e] = detail::ipow(pi0, e);
    pi1_pow[e] = detail::ipow(pi1, e);
  }

  if (kind == StepKind::StepUp) {
    // Psi_{m-k}(1 - G(s_m), ..., 1 - G(s_{k+1})).
    std::vector<Real> r(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
      const Real& x = s[m + 1 - i];
      r[i - 1] = Real(1) - G(x, detail::alt_cdf(F, x));
      if (r[i - 1] < Real(0)) r[i - 1] = Real(0);
    }
    for (int i = 1; i < m; ++i) r[i] = std::max(r[i], r[i - 1]);
    const OnePopulationTable<Real> table(r);
    sink.out.min_raw = std::min(sink.out.min_raw, table.min_raw());
    for (int k = 0; k <= m; ++k) {
      if (!sink.wants(k)) continue;
      const Real fk = k == 0 ? Real(0) : detail::alt_cdf(F, s[k]);
      for (int j = 0; j <= k; ++j) {
        const Real pref = binom(m, j) * binom(m - j, k - j) * pi0_pow[j] * pi1_pow[k - j] *
                          detail::ipow(s[k], j) * detail::ipow(fk, k - j);
        sink.put(k, j, detail::to_double(Real(pref * table(m - k))));
      }
    }
  } else {
    std::vector<Real> sv(s.begin() + 1, s.begin() + 1 + m);
    std::vector<Real> f(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) f[i] = detail::alt_cdf(F, sv[i]);
    const TwoPopulationTable<Real> table(sv, f, m, m);
    sink.out.min_raw = std::min(sink.out.min_raw, table.min_raw());
    for (int k = 0; k <= m; ++k) {
      if (!sink.wants(k)) continue;
      const Real next = s[k + 1];
      const Real f_next = k == m ? Real(1) : detail::alt_cdf(F, next);
      Real tail = Real(1) - G(next, f_next);
      if (tail < Real(0)) tail = Real(0);
      const Real tail_pow = detail::ipow(tail, m - k);
      for (int j = 0; j <= k; ++j) {
        const Real pref = binom(m, j) * binom(m - j, k - j) * pi0_pow[j] * pi1_pow[k - j] * tail_pow;
        sink.put(k, j, detail::to_double(Real(pref * table(k, j))));
      }
    }
  }
}

void fill(const ThresholdCollection& t, StepKind kind, const MixtureConfig& cfg, Precision precision,
          Sink sink) {
  if (cfg.m() != t.m()) throw std::invalid_argument("threshold collection and model disagree on m");
  AlternativeCdf F = cfg.F();
  if (cfg.model() == ModelKind::FM) {
    // With no alternatives F never enters the formulas.
    if (cfg.m0() == cfg.m()) F = AlternativeCdf::identity();
    require_continuous(F);
    if (precision == Precision::Rational) {
      fill_fm<mpq_class>(t, kind, cfg.m0(), F, sink);
    } else {
      fill_fm<double>(t, kind, cfg.m0(), F, sink);
    }
  } else {
    if (cfg.pi0() == 1.0) F = AlternativeCdf::identity();
    require_continuous(F);
    if (precision == Precision::Rational) {
      fill_rm<mpq_class>(t, kind, cfg.pi0(), F, sink);
    } else {
      fill_rm<double>(t, kind, cfg.pi0(), F, sink);
    }
  }
}

JointPmf empty_pmf(const MixtureConfig& cfg) {
  return JointPmf(cfg.m(), cfg.model(), cfg.model() == ModelKind::FM ? cfg.m0() : 0);
}

double single_cell(const ThresholdCollection& t, StepKind kind, const MixtureConfig& cfg, int k, int j) {
  JointPmf pmf = empty_pmf(cfg);
  if (k < 0 || k > cfg.m() || j < pmf.j_min(k) || j > pmf.j_max(k)) {
    throw std::out_of_range("(k, j) outside the pmf support");
  }
  fill(t, kind, cfg, Precision::Double, Sink{pmf, k, k});
  return pmf(k, j);
}

void require_lambda(const ThresholdCollection& t, int lambda) {
  if (lambda < 1 || lambda > t.m()) throw std::out_of_range("lambda must lie in [1, m]");
}

}  // namespace

JointPmf joint_table(const ThresholdCollection& t, StepKind kind, const MixtureConfig& cfg, Precision precision) {
  JointPmf pmf = empty_pmf(cfg);
  fill(t, kind, cfg, precision, Sink{pmf, 0, cfg.m()});
  return pmf;
}

double joint_su_rm(const ThresholdCollection& t, int k, int j, double pi0, const AlternativeCdf& F) {
  return single_cell(t, StepKind::StepUp, MixtureConfig::random(t.m(), pi0, F), k, j);
}
double joint_sd_rm(const ThresholdCollection& t, int k, int j, double pi0, const AlternativeCdf& F) {
  return single_cell(t, StepKind::StepDown, MixtureConfig::random(t.m(), pi0, F), k, j);
}
double joint_su_fm(const ThresholdCollection& t, int k, int j, int m0, const AlternativeCdf& F) {
  return single_cell(t, StepKind::StepUp, MixtureConfig::fixed(t.m(), m0, F), k, j);
}
double joint_sd_fm(const ThresholdCollection& t, int k, int j, int m0, const AlternativeCdf& F) {
  return single_cell(t, StepKind::StepDown, MixtureConfig::fixed(t.m(), m0, F), k, j);
}

JointPmf sud_joint(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, Precision precision) {
  require_lambda(t, lambda);
  JointPmf pmf = empty_pmf(cfg);
  fill(t.su_part(lambda), StepKind::StepUp, cfg, precision, Sink{pmf, 0, lambda - 1});
  fill(t.sd_part(lambda), StepKind::StepDown, cfg, precision, Sink{pmf, lambda, cfg.m()});
  return pmf;
}

FdrResult fdr_sud(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, Precision precision) {
  require_lambda(t, lambda);
  if (cfg.model() == ModelKind::FM && cfg.m0() == 0) return {};
  if (cfg.model() == ModelKind::RM && cfg.pi0() == 0.0) return {};
  const JointPmf pmf = sud_joint(t, lambda, cfg, precision);
  FdrResult r;
  r.su_part = pmf.fdr_over(1, lambda - 1);
  r.sd_part = pmf.fdr_over(lambda, cfg.m());
  r.fdr = r.su_part + r.sd_part;
  return r;
}

FdrResult fdr_sud_fm(const ThresholdCollection& t, int lambda, int m0, const AlternativeCdf& F,
                     Precision precision) {
  return fdr_sud(t, lambda, MixtureConfig::fixed(t.m(), m0, F), precision);
}

FdrResult fdr_sud_rm(const ThresholdCollection& t, int lambda, double pi0, const AlternativeCdf& F,
                     Precision precision) {
  return fdr_sud(t, lambda, MixtureConfig::random(t.m(), pi0, F), precision);
}

double fdr_pure(const ThresholdCollection& t, StepKind kind, const MixtureConfig& cfg, Precision precision) {
  return joint_table(t, kind, cfg, precision).fdr();
}

double fdp_cdf(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg, double x) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("fdp_cdf requires x in (0,1)");
  const JointPmf pmf = sud_joint(t, lambda, cfg);
  detail::Accumulator<double> acc;
  for (int k = 0; k <= pmf.m(); ++k) {
    // j <= floor(x k), boundary included: FDP <= x is a weak inequality.
    const int j_cap = static_cast<int>(std::floor(x * k + 1e-9));
    for (int j = pmf.j_min(k); j <= std::min(pmf.j_max(k), j_cap); ++j) acc.add(pmf(k, j));
  }
  return acc.value();
}

std::vector<double> fdp_pmf_histogram(const JointPmf& sud, int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  std::vector<detail::Accumulator<double>> acc(static_cast<std::size_t>(bins + 1));
  for (int k = 0; k <= sud.m(); ++k) {
    for (int j = sud.j_min(k); j <= sud.j_max(k); ++j) {
      // floor(bins * j / k) in integers: FDP = j/k lands in [i/bins, (i+1)/bins).
      const int bin = k == 0 ? 0 : static_cast<int>((static_cast<long long>(j) * bins) / k);
      acc[static_cast<std::size_t>(bin)].add(sud(k, j));
    }
  }
  std::vector<double> out;
  out.reserve(acc.size());
  for (const auto& a : acc) out.push_back(a.value());
  return out;
}

std::vector<double> fdp_pmf_histogram(const ThresholdCollection& t, int lambda, const MixtureConfig& cfg,
                                      int bins) {
  return fdp_pmf_histogram(sud_joint(t, lambda, cfg), bins);
}

ExtremeConfigFdr extreme_config_closed_forms(int m, int m0, double t0) {
  if (!(t0 > 0.0 && t0 < 1.0)) throw std::invalid_argument("t0 must lie in (0,1)");
  if (m0 < 1 || m0 > m) throw std::invalid_argument("m0 must lie in [1, m]");
  ExtremeConfigFdr r;
  r.fdr_sud = -std::expm1(m0 * std::log1p(-t0));
  r.fdr_su = static_cast<double>(m0) / m;
  r.crossover_t0 = -std::expm1(std::log1p(-static_cast<double>(m0) / m) / m0);
  return r;
}

ThresholdCollection extreme_thresholds(int m, double t0) {
  if (m < 2) throw std::invalid_argument("extreme threshold collection needs m >= 2");
  if (!(t0 > 0.0 && t0 < 1.0)) throw std::invalid_argument("t0 must lie in (0,1)");
  std::vector<double> t(static_cast<std::size_t>(m), t0);
  t.back() = 1.0;
  return ThresholdCollection(std::move(t));
}

}  // namespace sudfdr
