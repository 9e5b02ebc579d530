"""Heterogeneous coefficient profiles r(x), gamma(x), mu1(x), mu2(x).

A profile family is described by a small :class:`ProfileSpec` so that it can
live in a config file. :class:`CoefficientProfile` bundles the four rate
profiles with the scalar constants of the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import InvalidProfile

KINDS = ("constant", "step", "bump", "tabulated")

_REQUIRED = {
    "constant": ("value",),
    "step": ("left", "right", "at"),
    "bump": ("base", "amp", "center", "width"),
    "tabulated": ("limit",),
}


@dataclass(frozen=True)
class ProfileSpec:
    """One spatial rate profile.

    kinds and parameters:

    * ``constant``: ``value``
    * ``step``: ``left``, ``right``, ``at`` (value is ``left`` for x < at)
    * ``bump``: ``base + amp * exp(-((x - center) / width)**2)``
    * ``tabulated``: sample table ``xs``/``values``, piecewise linear inside
      the table and equal to ``limit`` outside it. ``source`` optionally
      records the file the table was read from.
    """

    kind: str
    params: dict[str, float] = field(default_factory=dict)
    xs: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    source: str | None = None

    def __post_init__(self):
        validate_spec(self)

    @classmethod
    def constant(cls, value: float) -> ProfileSpec:
        return cls("constant", {"value": float(value)})

    @classmethod
    def step(cls, left: float, right: float, at: float = 0.0) -> ProfileSpec:
        return cls("step", {"left": float(left), "right": float(right), "at": float(at)})

    @classmethod
    def bump(cls, base: float, amp: float, center: float = 0.0, width: float = 1.0) -> ProfileSpec:
        return cls(
            "bump",
            {"base": float(base), "amp": float(amp), "center": float(center), "width": float(width)},
        )

    @classmethod
    def tabulated(cls, xs, values, limit: float, source: str | None = None) -> ProfileSpec:
        return cls(
            "tabulated",
            {"limit": float(limit)},
            tuple(float(v) for v in xs),
            tuple(float(v) for v in values),
            source,
        )

    @classmethod
    def from_file(cls, path: str, limit: float) -> ProfileSpec:
        """Read a two-column ``x value`` text table (``#`` starts a comment)."""
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] != 2:
            raise InvalidProfile(f"{path}: expected two columns, got {data.shape[1]}")
        return cls.tabulated(data[:, 0], data[:, 1], limit, source=str(path))

    @property
    def limits(self) -> tuple[float, float]:
        """Values approached as x -> -inf and x -> +inf."""
        p = self.params
        if self.kind == "constant":
            return p["value"], p["value"]
        if self.kind == "step":
            return p["left"], p["right"]
        if self.kind == "bump":
            return p["base"], p["base"]
        return p["limit"], p["limit"]

    def __call__(self, x):
        return evaluate_profile(self, x)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind, **self.params}
        if self.kind == "tabulated":
            if self.source is not None:
                d["file"] = self.source
            else:
                d["xs"] = list(self.xs)
                d["values"] = list(self.values)
        return d


def validate_spec(spec: ProfileSpec) -> None:
    if spec.kind not in KINDS:
        raise InvalidProfile(f"unknown profile kind {spec.kind!r}; expected one of {KINDS}")
    missing = [k for k in _REQUIRED[spec.kind] if k not in spec.params]
    extra = [k for k in spec.params if k not in _REQUIRED[spec.kind]]
    if missing or extra:
        raise InvalidProfile(f"{spec.kind} profile: missing {missing}, unexpected {extra}")
    for k, v in spec.params.items():
        if not math.isfinite(v):
            raise InvalidProfile(f"{spec.kind} profile: {k}={v} is not finite")
    p = spec.params
    if spec.kind == "constant" and p["value"] <= 0:
        raise InvalidProfile("constant profile must be positive")
    if spec.kind == "step" and min(p["left"], p["right"]) <= 0:
        raise InvalidProfile("step profile levels must be positive")
    if spec.kind == "bump":
        if p["width"] <= 0:
            raise InvalidProfile("bump width must be positive")
        if p["base"] <= 0 or p["base"] + min(p["amp"], 0.0) <= 0:
            raise InvalidProfile("bump profile must stay positive (base > 0, base + amp > 0)")
    if spec.kind == "tabulated":
        xs = np.asarray(spec.xs)
        vals = np.asarray(spec.values)
        if xs.size < 2 or xs.size != vals.size:
            raise InvalidProfile("tabulated profile needs matching xs/values with >= 2 rows")
        if np.any(np.diff(xs) <= 0):
            raise InvalidProfile("tabulated xs must be strictly increasing")
        if not (np.all(np.isfinite(vals)) and np.all(vals > 0)):
            raise InvalidProfile("tabulated values must be finite and positive")
        if p["limit"] <= 0:
            raise InvalidProfile("tabulated limit must be positive")


def evaluate_profile(spec: ProfileSpec, x):
    """Evaluate ``spec`` at ``x`` (scalar or array); scalars give a float."""
    xa = np.asarray(x, dtype=float)
    p = spec.params
    if spec.kind == "constant":
        out = np.full(xa.shape, p["value"])
    elif spec.kind == "step":
        out = np.where(xa < p["at"], p["left"], p["right"])
    elif spec.kind == "bump":
        out = p["base"] + p["amp"] * np.exp(-(((xa - p["center"]) / p["width"]) ** 2))
    else:
        out = np.interp(xa, spec.xs, spec.values, left=p["limit"], right=p["limit"])
    if not np.all(np.isfinite(out)):
        raise InvalidProfile(f"{spec.kind} profile produced a non-finite value")
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class CoefficientProfile:
    """The model environment: four rate profiles plus D, nu, K1, K2."""

    r: ProfileSpec
    gamma: ProfileSpec
    mu1: ProfileSpec
    mu2: ProfileSpec
    D: float
    nu: float = 0.0
    K1: float = 1.0
    K2: float = 1.0
    homogenization_radius: float = 50.0

    def __post_init__(self):
        for name in ("D", "K1", "K2", "homogenization_radius"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidProfile(f"{name} must be positive and finite, got {v}")
        if not math.isfinite(self.nu):
            raise InvalidProfile("nu must be finite")
        for name in ("r", "gamma", "mu1", "mu2"):
            lo, hi = getattr(self, name).limits
            if lo != hi:
                raise InvalidProfile(
                    f"{name}: far-field limits differ at -inf ({lo}) and +inf ({hi})"
                )

    @classmethod
    def homogeneous(cls, r, gamma, mu1, mu2, D, nu=0.0, K1=1.0, K2=1.0, **kw) -> CoefficientProfile:
        c = ProfileSpec.constant
        return cls(c(r), c(gamma), c(mu1), c(mu2), D, nu, K1, K2, **kw)

    @property
    def r_inf(self) -> float:
        return self.r.limits[0]

    @property
    def gamma_inf(self) -> float:
        return self.gamma.limits[0]

    @property
    def mu1_inf(self) -> float:
        return self.mu1.limits[0]

    @property
    def mu2_inf(self) -> float:
        return self.mu2.limits[0]

    def rates(self, x):
        """Return ``(r, gamma, mu1, mu2)`` sampled at ``x``."""
        return (
            evaluate_profile(self.r, x),
            evaluate_profile(self.gamma, x),
            evaluate_profile(self.mu1, x),
            evaluate_profile(self.mu2, x),
        )

    def net_reproduction(self, x):
        """r*gamma/(mu2+gamma), the per-capita weight of the threshold quotient."""
        r, g, _, m2 = self.rates(x)
        return r * g / (m2 + g)

    def replace(self, **changes) -> CoefficientProfile:
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    value: float
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self):
        return self.passed


def check_assumption_H(profile: CoefficientProfile, tolerance: float = 1e-6) -> Verdict:
    """High-risk far field test ``r_inf*gamma_inf/(mu2_inf+gamma_inf) - mu1_inf > 0``.

    Also samples each profile at ``+-R, +-2R, +-4R`` (R the homogenization
    radius) and reports the largest deviation from the declared limit.
    """
    margin = (
        profile.r_inf * profile.gamma_inf / (profile.mu2_inf + profile.gamma_inf)
        - profile.mu1_inf
    )
    R = profile.homogenization_radius
    probe = np.array([-4 * R, -2 * R, -R, R, 2 * R, 4 * R])
    deviation = 0.0
    for name in ("r", "gamma", "mu1", "mu2"):
        spec = getattr(profile, name)
        vals = evaluate_profile(spec, probe)
        deviation = max(deviation, float(np.max(np.abs(vals - spec.limits[0]))))
    far_ok = deviation <= tolerance
    return Verdict(
        passed=bool(margin > 0 and far_ok),
        value=margin,
        details={"margin_positive": bool(margin > 0), "far_field_deviation": deviation,
                 "far_field_match": far_ok},
    )


def small_advection_bound(profile: CoefficientProfile) -> float:
    num = profile.r_inf * profile.gamma_inf - profile.mu1_inf * (profile.mu2_inf + profile.gamma_inf)
    return 2.0 * profile.D * math.sqrt(max(num, 0.0) / (profile.mu2_inf + profile.gamma_inf))


def check_small_advection(profile: CoefficientProfile) -> Verdict:
    """``|nu| < 2D sqrt((r_inf gamma_inf - mu1_inf (mu2_inf+gamma_inf))/(mu2_inf+gamma_inf))``."""
    bound = small_advection_bound(profile)
    return Verdict(
        passed=bool(abs(profile.nu) < bound),
        value=bound,
        details={"nu": profile.nu, "bound": bound},
    )
