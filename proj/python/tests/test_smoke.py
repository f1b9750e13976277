import math

import pytest

import sudfdr as s


def test_counterexample_ordering():
    t = s.linear_thresholds(0.5, 10)
    for lam in (4, 5, 6, 7):
        ident = s.fdr_sud(t, lam, s.MixtureConfig.fixed(10, 7, s.AlternativeCdf.identity())).fdr
        dirac = s.fdr_sud(t, lam, s.MixtureConfig.fixed(10, 7, s.AlternativeCdf.dirac_zero())).fdr
        assert ident > dirac
    assert s.fdr_sud(t, 4, s.MixtureConfig.fixed(10, 7, s.AlternativeCdf.identity())).fdr == pytest.approx(
        0.342981, abs=5e-7
    )


def test_step_up_in_random_mixture():
    t = s.linear_thresholds(0.05, 20)
    cfg = s.MixtureConfig.random(20, 0.7, s.AlternativeCdf.gaussian(1.0))
    assert s.fdr_sud(t, 20, cfg).fdr == pytest.approx(0.035, abs=1e-12)


def test_joint_and_histogram():
    t = s.linear_thresholds(0.5, 8)
    cfg = s.MixtureConfig.fixed(8, 5, s.AlternativeCdf.gaussian(2.0))
    joint = s.sud_joint(t, 3, cfg)
    assert sum(map(sum, joint)) == pytest.approx(1.0, abs=1e-12)
    hist = s.fdp_pmf_histogram(t, 3, cfg, 4)
    assert len(hist) == 5
    assert sum(hist) == pytest.approx(1.0, abs=1e-12)


def test_rational_mode_matches():
    t = s.linear_thresholds(0.5, 12)
    cfg = s.MixtureConfig.fixed(12, 9, s.AlternativeCdf.identity())
    assert s.fdr_sud(t, 6, cfg, rational=True).fdr == pytest.approx(s.fdr_sud(t, 6, cfg).fdr, abs=1e-14)


def test_monte_carlo_is_seeded():
    t = s.linear_thresholds(0.5, 10)
    cfg = s.MixtureConfig.fixed(10, 7, s.AlternativeCdf.identity())
    a = s.simulate_fdr(t, 5, cfg, 20000, 11, threads=1)
    b = s.simulate_fdr(t, 5, cfg, 20000, 11, threads=2)
    assert a.mean == b.mean
    exact = s.fdr_sud(t, 5, cfg).fdr
    assert abs(a.mean - exact) <= 4 * a.std_error


def test_procedure_and_bounds():
    p = [0.8, 0.05, 0.33, 0.01, 0.7, 0.22, 0.1, 0.28, 0.6, 0.15]
    out = s.sud_khat(p, s.linear_thresholds(0.5, 10), 8)
    assert out.k_hat == 7
    rho = s.CriticalValueFunction.aorc(0.2)
    assert s.aorc_v_delta(0.2, 0.5, 0.01) == pytest.approx(0.99301709318468, abs=1e-12)
    b = s.gap_bound_rm(rho, 0.5, 0.2, 100, 0.5, s.rm_gamma_rule(100))
    assert b.vacuous == (b.gap_bound >= 1.0)
    assert math.isfinite(b.gap_bound)


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        s.CriticalValueFunction.linear(1.5)
    with pytest.raises(ValueError):
        s.ThresholdCollection([0.5, 0.2])
