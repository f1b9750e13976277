#include "sudfdr/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sudfdr/normal.hpp"

namespace sudfdr {

AlternativeCdf AlternativeCdf::gaussian(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("Gaussian location alternative needs a finite mu > 0");
  }
  return AlternativeCdf(AltKind::GaussianLocation, mu);
}

std::string AlternativeCdf::name() const {
  switch (kind_) {
    case AltKind::Identity:
      return "identity";
    case AltKind::GaussianLocation:
      return "gaussian";
    case AltKind::DiracZero:
      return "dirac";
    case AltKind::StepAtOne:
      return "step_at_one";
  }
  return "unknown";
}

double AlternativeCdf::cdf(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("F evaluated outside [0,1]");
  switch (kind_) {
    case AltKind::Identity:
      return t;
    case AltKind::GaussianLocation:
      if (t == 0.0) return 0.0;
      if (t == 1.0) return 1.0;
      return normal::upper_tail(normal::upper_tail_inverse(t) - mu_);
    case AltKind::DiracZero:
      return 1.0;
    case AltKind::StepAtOne:
      return t >= 1.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double AlternativeCdf::reflected_cdf(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("reflected F evaluated outside [0,1]");
  switch (kind_) {
    case AltKind::Identity:
      return t;
    case AltKind::GaussianLocation:
      // 1 - upper_tail(-z - mu) = upper_tail(z + mu) with z = upper_tail_inverse(t).
      if (t == 0.0) return 0.0;
      if (t == 1.0) return 1.0;
      return normal::upper_tail(normal::upper_tail_inverse(t) + mu_);
    case AltKind::DiracZero:
      // 1 - p = 1 almost surely.
      return t >= 1.0 ? 1.0 : 0.0;
    case AltKind::StepAtOne:
      return 1.0;
  }
  return 0.0;
}

double AlternativeCdf::sample(Xoshiro256& rng) const {
  switch (kind_) {
    case AltKind::Identity:
      return rng.uniform();
    case AltKind::GaussianLocation: {
      // Box-Muller; X ~ N(mu, 1) and p = P(Z >= X).
      const double u1 = rng.uniform();
      const double u2 = rng.uniform();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      return normal::upper_tail(z + mu_);
    }
    case AltKind::DiracZero:
      return 0.0;
    case AltKind::StepAtOne:
      return 1.0;
  }
  return 0.0;
}

double eval_F(const AlternativeCdf& F, double t) { return F.cdf(t); }

MixtureConfig MixtureConfig::fixed(int m, int m0, AlternativeCdf F) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (m0 < 0 || m0 > m) throw std::invalid_argument("m0 must lie in [0, m]");
  return MixtureConfig(ModelKind::FM, m, m0, 0.0, F);
}

MixtureConfig MixtureConfig::random(int m, double pi0, AlternativeCdf F) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (!(pi0 >= 0.0 && pi0 <= 1.0)) throw std::invalid_argument("pi0 must lie in [0,1]");
  return MixtureConfig(ModelKind::RM, m, 0, pi0, F);
}

int MixtureConfig::m0() const {
  if (model_ != ModelKind::FM) throw std::logic_error("m0 is only fixed in the FM model");
  return m0_;
}

double MixtureConfig::pi0() const {
  if (model_ != ModelKind::RM) throw std::logic_error("pi0 is only defined in the RM model");
  return pi0_;
}

double MixtureConfig::G(double t) const {
  if (model_ != ModelKind::RM) throw std::logic_error("G is only defined in the RM model");
  return pi0_ * t + (1.0 - pi0_) * F_.cdf(t);
}

MixtureConfig MixtureConfig::with_alternative(AlternativeCdf F) const {
  MixtureConfig copy = *this;
  copy.F_ = F;
  return copy;
}

std::string MixtureConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (model_ == ModelKind::FM) {
    os << "FM(m=" << m_ << ",m0=" << m0_;
  } else {
    os << "RM(m=" << m_ << ",pi0=" << pi0_;
  }
  os << ",F=" << F_.name();
  if (F_.kind() == AltKind::GaussianLocation) os << "(" << F_.mu() << ")";
  os << ")";
  return os.str();
}

double eval_G(const MixtureConfig& cfg, double t) { return cfg.G(t); }

void sample_into(const MixtureConfig& cfg, Xoshiro256& rng, PValueSample& out) {
  const int m = cfg.m();
  out.p.resize(static_cast<std::size_t>(m));
  int m0 = 0;
  if (cfg.model() == ModelKind::FM) {
    m0 = cfg.m0();
  } else {
    const double pi0 = cfg.pi0();
    for (int i = 0; i < m; ++i) m0 += rng.uniform() < pi0 ? 1 : 0;
  }
  out.m0_realized = m0;
  for (int i = 0; i < m0; ++i) out.p[i] = rng.uniform();
  const AlternativeCdf& F = cfg.F();
  for (int i = m0; i < m; ++i) out.p[i] = F.sample(rng);
}

PValueSample sample(const MixtureConfig& cfg, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  PValueSample out;
  sample_into(cfg, rng, out);
  return out;
}

}  // namespace sudfdr
