#pragma once

#include "sudfdr/models.hpp"
#include "sudfdr/thresholds.hpp"

namespace sudfdr {

/// Inputs of the finite-m bound on FDR(F) - FDR(Dirac-uniform).
/// kappa is lambda/m; zeta the (limiting) null proportion.
struct BoundInputs {
  CriticalValueFunction rho;
  double zeta = 0.5;
  double delta = 0.05;
  int m = 100;
  double kappa = 0.5;
};

struct FixedPointPair {
  double u_minus = 0.0;
  double u_plus = 0.0;
};

struct BoundResult {
  double u_minus = 0.0;
  double u_plus = 0.0;
  double epsilon = 0.0;
  double gap_bound = 0.0;
  double y = 0.0;  // nu (FM) or gamma (RM)
  ModelKind branch = ModelKind::FM;
  bool vacuous = false;  // gap_bound >= 1 says nothing about an FDR gap
};

/// G_DU(x) = (1 - zeta) + zeta x.
double du_cdf(double zeta, double x);

/// u+ = U(kappa, (G_DU + delta) ^ 1), u- = U(kappa, (G_DU - delta) v 0).
FixedPointPair u_plus_minus(const BoundInputs& in);

/// (rho(u+) - rho(u-)) / u+ + 4/(1-zeta) exp(-2m ((delta - y - 1/m)_+)^2 (1 - y/zeta)_+).
double epsilon_remainder(const BoundInputs& in, double y);

/// max over k in {m0-1, m0} of |k/m - zeta|.
double fm_nu(int m, int m0, double zeta);

/// (m0/m) eps(delta, m, zeta, nu); requires 0 < m0 < m.
BoundResult gap_bound_fm(const BoundInputs& in, int m0);
/// pi0 eps(delta, m, zeta, gamma) + 4 exp(-2m ((gamma - 1/m)_+)^2) with pi0 = zeta.
BoundResult gap_bound_rm(const BoundInputs& in, double gamma);

/// gamma solving 2 exp(-2m (gamma - 1/m)^2) = 1/m.
double rm_gamma_rule(int m);

struct DeltaChoice {
  double delta = 0.0;       // the analytic choice making the DKW term exactly 1/m
  BoundResult bound;
  double grid_delta = 0.0;  // best delta on a grid that contains `delta`
  BoundResult grid_bound;
};

DeltaChoice optimize_delta_fm(const CriticalValueFunction& rho, double zeta, int m, double kappa, int m0,
                              int grid_points = 2000);
DeltaChoice optimize_delta_rm(const CriticalValueFunction& rho, double zeta, int m, double kappa,
                              int grid_points = 2000);

/// Larger fixed point of (G_DU + delta) o rho for the AORC. The bound only
/// vanishes with delta while kappa stays below it. Requires zeta > alpha.
double aorc_v_delta(double alpha, double zeta, double delta);
/// kappa < v_delta; false when delta is so large that v_delta does not exist.
bool aorc_gate(double alpha, double zeta, double delta, double kappa);

}  // namespace sudfdr
