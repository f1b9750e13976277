#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sudfdr/rng.hpp"

namespace sudfdr {

enum class AltKind { Identity, GaussianLocation, DiracZero, StepAtOne };

/// Alternative p-value distribution F.
///
/// DiracZero has two faces: for the exact formulas it is the c.d.f. F = 1
/// (including F(0) = 1), for sampling it is a point mass at 0. StepAtOne,
/// F(t) = 1{t >= 1}, is not continuous; only the closed forms and the
/// Monte-Carlo engine accept it.
class AlternativeCdf {
 public:
  static AlternativeCdf identity() { return AlternativeCdf(AltKind::Identity, 0.0); }
  static AlternativeCdf gaussian(double mu);
  static AlternativeCdf dirac_zero() { return AlternativeCdf(AltKind::DiracZero, 0.0); }
  static AlternativeCdf step_at_one() { return AlternativeCdf(AltKind::StepAtOne, 0.0); }

  AltKind kind() const { return kind_; }
  double mu() const { return mu_; }
  bool continuous() const { return kind_ != AltKind::StepAtOne; }
  std::string name() const;

  /// F(t); throws std::domain_error outside [0,1].
  double cdf(double t) const;
  /// 1 - F(1 - t): the c.d.f. of 1 - p for p ~ F.
  double reflected_cdf(double t) const;
  /// Draw p ~ F.
  double sample(Xoshiro256& rng) const;

  bool operator==(const AlternativeCdf&) const = default;

 private:
  AlternativeCdf(AltKind kind, double mu) : kind_(kind), mu_(mu) {}

  AltKind kind_;
  double mu_;
};

double eval_F(const AlternativeCdf& F, double t);

enum class ModelKind { FM, RM };

/// FM(m, m0, F) or RM(m, pi0, F). True nulls occupy the first coordinates.
class MixtureConfig {
 public:
  static MixtureConfig fixed(int m, int m0, AlternativeCdf F);
  static MixtureConfig random(int m, double pi0, AlternativeCdf F);

  ModelKind model() const { return model_; }
  int m() const { return m_; }
  int m0() const;
  double pi0() const;
  const AlternativeCdf& F() const { return F_; }

  /// Mixed c.d.f. G(t) = pi0 t + (1 - pi0) F(t); RM only.
  double G(double t) const;

  MixtureConfig with_alternative(AlternativeCdf F) const;
  std::string describe() const;

 private:
  MixtureConfig(ModelKind model, int m, int m0, double pi0, AlternativeCdf F)
      : model_(model), m_(m), m0_(m0), pi0_(pi0), F_(F) {}

  ModelKind model_;
  int m_;
  int m0_;
  double pi0_;
  AlternativeCdf F_;
};

double eval_G(const MixtureConfig& cfg, double t);

struct PValueSample {
  std::vector<double> p;
  int m0_realized = 0;
};

/// Fill `out` with one p-value family drawn from `cfg` using `rng`.
void sample_into(const MixtureConfig& cfg, Xoshiro256& rng, PValueSample& out);

/// Deterministic in `seed`.
PValueSample sample(const MixtureConfig& cfg, std::uint64_t seed);

}  // namespace sudfdr
