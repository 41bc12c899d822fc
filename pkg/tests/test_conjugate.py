import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from weightlab import (Gevrey, Log, PiecewiseLogLinear, Power, conjugate)
from weightlab.errors import (NotMatrixAdmissible, Om3Violated,
                              ValidationFailed, YHorizonTooSmall)


def test_linear_weight_conjugate_closed_form():
    # phi(u) = e^u, so phi*(x) = x log x - x (and 0 at x = 0)
    prof = conjugate.young_conjugate(Power(1.0), x_max=200.0)
    for x in np.geomspace(0.1, 100.0, 40):
        expect = x * math.log(x) - x
        assert prof.value(float(x)) == pytest.approx(expect, rel=1e-8, abs=1e-8)
    assert prof.value(math.e) == pytest.approx(0.0, abs=1e-9)


def test_conjugate_against_brute_force_sup():
    prof = conjugate.young_conjugate(Gevrey(2.0), x_max=50.0)
    ys = np.linspace(0.0, 60.0, 400_000)
    phis = Gevrey(2.0).phi(ys)
    for x in (0.5, 2.0, 10.0, 40.0):
        brute = float(np.max(x * ys - phis))
        assert prof.value(x) == pytest.approx(brute, rel=1e-6, abs=1e-6)


def test_conjugate_is_convex():
    prof = conjugate.young_conjugate(Power(0.5), x_max=20.0)
    xs = np.linspace(0.0, 20.0, 200)
    vals = np.array([prof.value(float(x)) for x in xs])
    assert np.all(np.diff(vals, 2) >= -1e-6)  # convex
    assert vals[-1] > vals[0]                 # eventually increasing


def test_om3_precondition():
    with pytest.raises(Om3Violated):
        conjugate.young_conjugate(Log(), x_max=10.0)


def test_profile_conjugate_exact_and_capped():
    w = PiecewiseLogLinear([(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (3.0, 4.0)])
    prof = conjugate.young_conjugate(w, x_max=2.0)
    assert prof.exact
    # sup_x (x*u - phi(u)) for slopes below the final one is attained at a corner
    ys = np.linspace(0.0, 50.0, 200_001)
    phis = w.phi(ys)
    for x in (0.0, 0.5, 1.0, 2.0):
        brute = float(np.max(x * ys - phis))
        assert prof.value(x) == pytest.approx(brute, rel=1e-9, abs=1e-9)
    with pytest.raises(YHorizonTooSmall):
        conjugate.young_conjugate(w, x_max=10.0)  # beyond the final slope


@given(st.floats(min_value=0.0, max_value=30.0),
       st.floats(min_value=0.0, max_value=15.0))
def test_fenchel_young_inequality(x, y):
    prof = test_fenchel_young_inequality.prof
    w = Power(0.5)
    assert prof.value(x) + float(w.phi(y)) >= x * y - 1e-7 * (1.0 + x * y)


test_fenchel_young_inequality.prof = conjugate.young_conjugate(Power(0.5),
                                                               x_max=40.0)


def test_hulls_bracket_samples():
    rng = np.random.default_rng(3)
    us = np.sort(rng.uniform(0.0, 10.0, 30))
    us[0] = 0.0
    vs = rng.uniform(0.0, 5.0, 30)
    samples = list(zip(us, vs))
    upper = conjugate.least_concave_majorant(samples)
    lower = conjugate.largest_convex_minorant(samples)
    for u, v in samples:
        assert upper(u) >= v - 1e-9
        assert lower(u) <= v + 1e-9
    # hull slopes are monotone in the right direction
    assert np.all(np.diff(np.diff(upper.ys) / np.diff(upper.xs)) <= 1e-9)
    assert np.all(np.diff(np.diff(lower.ys) / np.diff(lower.xs)) >= -1e-9)


def test_omega_iota():
    assert conjugate.omega_iota(Power(1.0), 0.5) == pytest.approx(2.0)
    with pytest.raises(ValidationFailed):
        conjugate.omega_iota(Power(1.0), 0.0)


def test_double_conjugate_convex_input_zero_gap():
    u = np.linspace(0.0, 12.0, 300)
    biconj, rep = conjugate.double_conjugate(Gevrey(2.0), u)
    assert rep.zero_gap
    assert rep.convexity_consistent
    np.testing.assert_allclose(biconj, Gevrey(2.0).phi(u), atol=1e-9)


def test_double_conjugate_plateau_gap(plateau_profile_small):
    p = plateau_profile_small
    mids = np.array([(p.xbar[j] + p.y[j]) / 2.0 for j in range(6)])
    u = np.union1d(np.linspace(0.0, p.y[6], 1500), mids)
    biconj, rep = conjugate.double_conjugate(p.weight, u)
    assert not rep.zero_gap and rep.max_gap > 0
    assert rep.convexity_consistent
    gaps = np.asarray(p.weight.phi(mids)) - np.interp(mids, u, biconj)
    assert np.all(gaps > 0)


def test_associated_matrix_log_convex_monotone():
    logW = conjugate.associated_weight_matrix(Power(0.5), ell=1.0, j_max=40)
    assert logW[0] == pytest.approx(0.0, abs=1e-9)  # W_0 = 1
    second = np.diff(logW, 2)
    assert np.all(second >= -1e-8)
    logW2 = conjugate.associated_weight_matrix(Power(0.5), ell=2.0, j_max=40)
    # phi*(x)/x is nondecreasing for convex phi*, so the log-sequence grows
    # pointwise with ell
    assert np.all(logW2 >= logW - 1e-8)


def test_associated_matrix_rejects_log():
    with pytest.raises(NotMatrixAdmissible):
        conjugate.associated_weight_matrix(Log(), ell=1.0, j_max=10)
