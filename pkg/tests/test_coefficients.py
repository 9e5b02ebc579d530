import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aedesfront import (CoefficientProfile, ProfileSpec, check_assumption_H,
                        check_small_advection, evaluate_profile)
from aedesfront.config import parse_config, profile_section
from aedesfront.errors import InvalidProfile


def test_evaluate_examples():
    assert evaluate_profile(ProfileSpec.constant(1.5), 7.3) == 1.5
    assert evaluate_profile(ProfileSpec.step(1, 2, 0), -1) == 1
    assert evaluate_profile(ProfileSpec.step(1, 2, 0), 1) == 2
    assert evaluate_profile(ProfileSpec.bump(1, 0.5, 0, 1), 0) == 1.5


def test_tabulated_interpolates_and_extrapolates_to_limit():
    spec = ProfileSpec.tabulated([-1, 0, 1], [2, 4, 2], limit=1.0)
    assert evaluate_profile(spec, 0.5) == pytest.approx(3.0)
    assert evaluate_profile(spec, 5.0) == 1.0
    assert evaluate_profile(spec, -5.0) == 1.0


def test_tabulated_file(tmp_path):
    f = tmp_path / "r.txt"
    f.write_text("# x value\n-2 1.0\n0 3.0\n2 1.0\n")
    spec = ProfileSpec.from_file(str(f), limit=1.0)
    assert evaluate_profile(spec, 1.0) == pytest.approx(2.0)


@pytest.mark.parametrize("bad", [
    lambda: ProfileSpec.constant(-1),
    lambda: ProfileSpec.bump(1, -1.5, 0, 1),
    lambda: ProfileSpec.bump(1, 0.5, 0, 0),
    lambda: ProfileSpec("wave", {"value": 1.0}),
    lambda: ProfileSpec.tabulated([0, 0], [1, 1], 1.0),
    lambda: ProfileSpec.constant(float("nan")),
])
def test_invalid_specs_rejected(bad):
    with pytest.raises(InvalidProfile):
        bad()


def test_asymmetric_limits_rejected():
    with pytest.raises(InvalidProfile):
        CoefficientProfile(ProfileSpec.step(1, 2), ProfileSpec.constant(1),
                           ProfileSpec.constant(0.2), ProfileSpec.constant(1), D=1)


def test_assumption_H_examples():
    ok = check_assumption_H(CoefficientProfile.homogeneous(1, 1, 0.2, 1, D=1))
    assert ok.passed and ok.value == pytest.approx(0.3)
    edge = check_assumption_H(CoefficientProfile.homogeneous(1, 1, 0.5, 1, D=1))
    assert not edge.passed and edge.value == 0
    assert ok.details["far_field_deviation"] == 0


def test_assumption_H_far_field_check():
    slow = CoefficientProfile(ProfileSpec.bump(1, 0.5, 0, 60), ProfileSpec.constant(1),
                              ProfileSpec.constant(0.2), ProfileSpec.constant(1), D=1)
    v = check_assumption_H(slow)
    assert not v.passed and v.details["margin_positive"]


def test_small_advection_examples():
    p = CoefficientProfile.homogeneous(1, 1, 1e-300, 1, D=1, nu=1.0)
    v = check_small_advection(p)
    assert v.value == pytest.approx(2 * math.sqrt(0.5), rel=1e-12)
    assert v.passed
    assert check_small_advection(p.replace(nu=0.0)).passed
    assert not check_small_advection(p.replace(nu=v.value)).passed


positive = st.floats(0.05, 5.0)


@st.composite
def specs(draw):
    kind = draw(st.sampled_from(["constant", "step", "bump", "tabulated"]))
    if kind == "constant":
        return ProfileSpec.constant(draw(positive))
    if kind == "step":
        return ProfileSpec.step(draw(positive), draw(positive), draw(st.floats(-5, 5)))
    if kind == "bump":
        base = draw(positive)
        amp = draw(st.floats(-0.95, 3.0)) * base
        return ProfileSpec.bump(base, amp, draw(st.floats(-5, 5)), draw(st.floats(0.1, 5)))
    n = draw(st.integers(2, 8))
    xs = np.cumsum(draw(st.lists(st.floats(0.1, 2.0), min_size=n, max_size=n))) - 5
    vals = draw(st.lists(positive, min_size=n, max_size=n))
    return ProfileSpec.tabulated(xs, vals, draw(positive))


@settings(max_examples=100, deadline=None)
@given(specs(), st.floats(-1e3, 1e3))
def test_profiles_finite_positive(spec, x):
    v = evaluate_profile(spec, x)
    assert math.isfinite(v) and v > 0


@settings(max_examples=100, deadline=None)
@given(positive, positive, positive, positive)
def test_assumption_H_constant_is_sign_test(r, g, m1, m2):
    p = CoefficientProfile.homogeneous(r, g, m1, m2, D=1)
    assert check_assumption_H(p).passed == (r * g / (m2 + g) - m1 > 0)


@settings(max_examples=40, deadline=None)
@given(specs())
def test_profile_serialization_round_trip(spec):
    if spec.kind == "step":
        # a model needs equal limits on both sides
        spec = ProfileSpec.step(spec.params["right"], spec.params["right"], spec.params["at"])
    text = "[model]\nD = 1\n" + profile_section("r", spec) + "".join(
        profile_section(n, ProfileSpec.constant(1.0)) for n in ("gamma", "mu1", "mu2")
    ) + "[initial]\nh0 = 1\n"
    back = parse_config(text).profile.r
    probe = np.linspace(-20, 20, 1000)
    assert np.array_equal(evaluate_profile(back, probe), evaluate_profile(spec, probe))


def test_evaluation_deterministic(het):
    x = np.linspace(-3, 3, 101)
    assert np.array_equal(het.rates(x)[0], het.rates(x)[0])
