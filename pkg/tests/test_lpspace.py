import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weightlab import GridSpec, Log, Power, lpspace, relations
from weightlab.errors import GridTooNarrow, NoViolationFound


@pytest.fixture(scope="module")
def exp_matrix():
    return relations.WeightMatrix.exponential(Power(1.0))


@pytest.fixture(scope="module")
def gaussian():
    t = np.linspace(0.0, 40.0, 4001)
    return lpspace.SampledFunction(tuple(t), tuple(np.exp(-t * t)))


def test_sphere_factor():
    assert lpspace.sphere_factor(1) == pytest.approx(2.0)
    assert lpspace.sphere_factor(2) == pytest.approx(2.0 * math.pi)
    assert lpspace.sphere_factor(3) == pytest.approx(4.0 * math.pi)


def test_unweighted_gaussian_l2(gaussian):
    # near-zero weight: || e^{-t^2} ||_2 with radial factor 2 on the line
    from weightlab import Scaled
    res = lpspace.weighted_norm(gaussian, Scaled(1e-12, Log()), 2.0)
    expect = math.sqrt(math.sqrt(math.pi / 2.0))
    assert res.value == pytest.approx(expect, rel=1e-3)


def test_norm_scaling_homogeneity(gaussian):
    base = lpspace.weighted_norm(gaussian, Log(), 2.0)
    double = lpspace.weighted_norm(gaussian.scaled(2.0), Log(), 2.0)
    assert double.value == pytest.approx(2.0 * base.value, rel=1e-9)


def test_sup_norm_is_weighted_peak(gaussian):
    res = lpspace.weighted_norm(gaussian, Log(), math.inf)
    t = gaussian.t_array()
    expect = float(np.max(gaussian.value_array()
                          * (1.0 + t)))  # e^{log(1+t)} = 1 + t
    assert res.value == pytest.approx(expect, rel=1e-9)


def test_divergent_norm_detected():
    t = np.linspace(0.0, 60.0, 6001)
    f = lpspace.SampledFunction(tuple(t), tuple(np.ones_like(t)))
    res = lpspace.weighted_norm(f, Power(1.0), math.inf)
    assert res.divergent


def test_theta_norm_unit(exp_matrix):
    for ell in (0.5, 1.0, 2.0):
        v = lpspace.theta_membership(exp_matrix, math.inf, ell, ell)
        assert v.holds
        assert v.certificate["norm"] == pytest.approx(1.0, abs=1e-12)
        below = lpspace.theta_membership(exp_matrix, math.inf, ell, 0.5 * ell)
        assert below.holds and below.certificate["norm"] <= 1.0 + 1e-12
        above = lpspace.theta_membership(exp_matrix, math.inf, ell, 2.0 * ell)
        assert above.fails


def test_nontriviality_witness(exp_matrix):
    psi, rep = lpspace.nontriviality_witness(exp_matrix, math.inf)
    assert rep.all_finite
    psi2, rep2 = lpspace.nontriviality_witness(exp_matrix, 2.0)
    assert rep2.all_finite


def test_staircase_mass_and_divergence(exp_matrix):
    g, rep = lpspace.staircase_witness(exp_matrix, 1.0)
    n = len(rep.centers)
    assert rep.lp_mass == pytest.approx(sum(2.0 ** -k for k in range(1, n + 1)),
                                        abs=1e-10)
    assert all(rep.weighted_divergent.values())


def test_staircase_refuses_slow_rows():
    # log rows grow too slowly to clear the block thresholds within the
    # search horizon, which must surface as an explicit failure
    slow = relations.WeightMatrix.exponential(Log())
    with pytest.raises(NoViolationFound):
        lpspace.staircase_witness(slow, 1.0)


def test_translation_preserves_mass():
    t = np.linspace(0.0, 20.0, 2001)
    vals = np.exp(-((t - 3.0) ** 2))
    f = lpspace.SampledFunction(tuple(t), tuple(vals))
    g = f.translated(5.0)
    assert np.max(g.value_array()) == pytest.approx(np.max(vals), rel=1e-6)
    with pytest.raises(GridTooNarrow):
        f.translated(19.0)


def test_translation_bound(exp_matrix):
    t = np.linspace(0.0, 30.0, 3001)
    f = lpspace.SampledFunction(tuple(t), tuple(np.exp(-((t - 2.0) ** 2))))
    S = exp_matrix
    T = relations.WeightMatrix.exponential(Power(1.0))
    rep = lpspace.translation_bound_check(S, T, f, (1.0, 2.0), 2.0)
    assert rep is not None


def test_inclusion_experiment_forward():
    S = relations.WeightMatrix.exponential(Power(1.0))
    T = relations.WeightMatrix.exponential(Power(0.5))
    er = lpspace.inclusion_experiment(S, T, 2.0, "beurling")
    assert er.relation.verdict.holds
    assert er.forward_rows and er.all_ok
    assert not er.degraded


def test_inclusion_experiment_converse():
    S = relations.WeightMatrix.exponential(Power(0.5))
    T = relations.WeightMatrix.exponential(Power(1.0))
    er = lpspace.inclusion_experiment(S, T, 2.0, "beurling")
    assert er.relation.verdict.fails
    assert er.converse_rows and er.all_ok
    assert all(r["kind"] == "divergent" for r in er.converse_rows)


@settings(max_examples=15, deadline=None)
@given(st.floats(min_value=1.0, max_value=4.0))
def test_norm_monotone_in_weight(c):
    t = np.linspace(0.0, 20.0, 1001)
    f = lpspace.SampledFunction(tuple(t), tuple(np.exp(-t)))
    small = lpspace.weighted_norm(f, Log(), 2.0)
    from weightlab import Scaled
    big = lpspace.weighted_norm(f, Scaled(c, Log()), 2.0)
    assert big.value >= small.value - 1e-12
