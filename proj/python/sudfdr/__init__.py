"""Exact and Monte-Carlo FDR of step-up-down procedures."""

from ._core import (
    AlternativeCdf,
    CriticalValueFunction,
    MixtureConfig,
    PrecisionError,
    ThresholdCollection,
    aorc_v_delta,
    fdp_cdf,
    fdp_pmf_histogram,
    fdr_sud,
    gap_bound_fm,
    gap_bound_rm,
    psi,
    psi_two_pop,
    rm_gamma_rule,
    simulate_fdr,
    simulate_kfwer,
    sud_joint,
    sud_khat,
)

__version__ = "0.1.0"


def linear_thresholds(alpha, m):
    """Simes critical values alpha * k / m."""
    return ThresholdCollection.from_rho(CriticalValueFunction.linear(alpha), m)
