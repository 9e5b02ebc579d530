import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from aedesfront import (CoefficientProfile, ProfileSpec, R0F_trace, compute_lambda0,
                        compute_R0, threshold_report)
from aedesfront.errors import DegenerateDomain
from aedesfront.frontfix import SimulationState
from aedesfront.threshold import compute_R0_direct, principal_eigenpair

from conftest import bump_profile, random_profile


def closed_form(r, g, m1, m2, D, nu, length):
    return math.sqrt((r * g / (m2 + g)) / (D * (math.pi / length) ** 2 + nu**2 / (4 * D) + m1))


def test_closed_form_example(hom):
    rep = compute_R0((-math.pi / 2, math.pi / 2), hom, 512)
    assert rep.R0 == pytest.approx(math.sqrt(0.4), rel=1e-4)
    assert abs(rep.R0 - 0.63246) < 1e-5


def test_richardson_closed_form(hom):
    p = hom.replace(nu=0.3, D=0.5)
    exact = closed_form(1, 1, 0.25, 1, 0.5, 0.3, 2 * math.pi)
    # the error is O(dx^2); nodes counted with endpoints, so dx halves at 2n-1
    coarse = compute_R0((-math.pi, math.pi), p, 257).R0
    fine = compute_R0((-math.pi, math.pi), p, 513).R0
    assert (4 * fine - coarse) / 3 == pytest.approx(exact, rel=1e-6)


def test_eigenfunction_positive(het):
    rep = compute_R0((-3, 3), het, 256)
    assert np.all(rep.eigen_M[1:-1] > 0) and np.all(rep.eigen_A[1:-1] > 0)
    assert rep.eigen_M[0] == rep.eigen_M[-1] == 0


def test_R0_decreases_with_advection(het):
    vals = [compute_R0((-3, 3), het.replace(nu=nu), 256).R0 for nu in (0, 0.2, 0.4, 0.8)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_nested_intervals(het):
    assert compute_R0((-1, 1), het, 256).R0 <= compute_R0((-2, 2), het, 256).R0


def test_gauge_invariance():
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = random_profile(rng)
        gaps = []
        for n in (400, 800):
            a = compute_R0((-2.0, 3.0), p, n).R0
            gaps.append(abs(a / compute_R0_direct((-2.0, 3.0), p, n) - 1))
        # both are consistent second-order schemes; they differ only at O(dx^2)
        assert gaps[1] < 1e-6
        assert gaps[1] < gaps[0] / 3


def test_lambda0_zero_at_crossing(hom):
    f = lambda L: compute_R0((-L, L), hom, 512).R0 - 1.0
    L = optimize.brentq(f, 1.0, 20.0, xtol=1e-13, rtol=1e-14)
    assert abs(f(L)) < 1e-8
    assert abs(compute_lambda0((-L, L), hom, 512)) < 1e-6


def test_lambda0_signs(hom):
    assert compute_lambda0((-0.2, 0.2), hom, 256) > 0
    assert compute_lambda0((-30, 30), hom, 512) < 0


def test_lambda0_eigenpair_positive(het):
    pair = principal_eigenpair((-4, 4), het, 256)
    assert np.all(pair.phi[1:-1] > 0) and np.all(pair.psi[1:-1] > 0)


def test_threshold_report_fields(het):
    rep = threshold_report((-4, 4), het, 256)
    d = rep.to_dict()
    assert d["R0"] > 1 and d["lambda0"] < 0
    assert len(d["x"]) == len(d["eigen_M"]) == 256


def test_decay_in_D():
    p = CoefficientProfile(ProfileSpec.bump(1.0, 0.8, 0.3, 0.7), ProfileSpec.constant(1.0),
                           ProfileSpec.bump(0.2, 0.1, -0.5, 1.0), ProfileSpec.constant(1.0),
                           D=1.0, nu=0.4)
    p_, q_ = -2.0, 2.0
    x = np.linspace(p_, q_, 2001)
    r, g, m1, m2 = p.rates(x)
    top = r.max() * g.max() / (m2.min() + g.min())
    prev = math.inf
    for D in (10.0, 100.0, 1000.0):
        R = compute_R0((p_, q_), p.replace(D=D), 512).R0
        bound = math.sqrt(top / (D * (math.pi / (q_ - p_)) ** 2 + p.nu**2 / (4 * D) + m1.min()))
        assert R <= bound and R < prev
        prev = R
    assert prev < 0.05


def test_far_field_lower_bound():
    p = bump_profile(nu=0.3)
    far = math.sqrt((1 * 1 / 2) / (0.25 + 0.3**2 / 4))
    assert compute_R0((-100, 100), p, 2048).R0 > far - 0.05


def test_degenerate_interval(hom):
    with pytest.raises(DegenerateDomain):
        compute_R0((1.0, 1.0), hom)


def _state(t, g, h):
    M = np.zeros(17)
    return SimulationState(t, g, h, M, M.copy(), 1.0)


def test_trace_static_and_expanding(het):
    static = R0F_trace([_state(t, -1, 1) for t in range(4)], het)
    assert len({v for _, v in static}) == 1
    grow = R0F_trace([_state(t, -1 - 0.5 * t, 1 + 0.5 * t) for t in range(4)], het)
    vals = [v for _, v in grow]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.2, 6.0), st.floats(-3, 3))
def test_sign_relation_property(seed, width, left):
    p = random_profile(np.random.default_rng(seed))
    interval = (left, left + width)
    R0 = compute_R0(interval, p, 128).R0
    if abs(1 - R0) > 1e-4:
        assert np.sign(1 - R0) == np.sign(compute_lambda0(interval, p, 128))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 1.0), st.floats(0.01, 1.0))
def test_monotone_in_nu_property(seed, nu1, dnu):
    p = random_profile(np.random.default_rng(seed))
    a = compute_R0((-2, 2), p.replace(nu=nu1), 128).R0
    b = compute_R0((-2, 2), p.replace(nu=-(nu1 + dnu)), 128).R0
    assert a > b
