"""Spreading / vanishing classification, sharp-threshold search, comparison runs."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coefficients import CoefficientProfile
from .errors import InconclusiveRegion, InvalidBracket
from .frontfix import InitialData, SolverConfig, Trajectory, run, sample_field
from .threshold import compute_R0


class Label(str, enum.Enum):
    SPREADING = "Spreading"
    VANISHING = "Vanishing"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class ClassifierRules:
    """Numerical surrogates for the two long-time alternatives.

    Spreading fires as soon as R0 on the current habitat reaches ``1 + eps_R``.
    Vanishing needs three things at once: front-gap growth over the trailing
    window below ``eps_g * h0``, ``sup M + sup A`` below ``eps_d * (K1 + K2)``,
    and R0 below ``1 - eps_R``.
    """

    eps_R: float = 1e-3
    eps_g: float = 1e-6
    eps_d: float = 1e-6
    window_fraction: float = 0.1
    resolution: int = 256


@dataclass
class Outcome:
    label: Label
    stop_time: float
    rule: str
    gap: float
    sup_M: float
    sup_A: float
    R0F: float
    R0F_trace: list[tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "label": self.label.value,
            "stop_time": self.stop_time,
            "rule": self.rule,
            "gap": self.gap,
            "sup_M": self.sup_M,
            "sup_A": self.sup_A,
            "R0F": self.R0F,
        }


class _Classifier:
    """Incremental rule evaluation, usable both post hoc and as a stop callback."""

    def __init__(self, profile, h0, horizon, rules):
        self.profile = profile
        self.h0 = h0
        self.rules = rules
        self.window = rules.window_fraction * horizon
        self.trace: list[tuple[float, float]] = []
        self._cache: dict = {}
        self.fired: str | None = None

    def R0F(self, g, h):
        key = (g, h)
        if key not in self._cache:
            self._cache[key] = compute_R0(key, self.profile, self.rules.resolution).R0
        return self._cache[key]

    def __call__(self, state, snaps):
        rules, p = self.rules, self.profile
        R = self.R0F(state.g, state.h)
        self.trace.append((state.t, R))
        if R >= 1 + rules.eps_R:
            self.fired = "spreading"
            return "spreading"
        if state.t < self.window or self.window <= 0:
            return None
        past = None
        for s in reversed(snaps):
            if s.t <= state.t - self.window + 1e-9:
                past = s
                break
        if past is None:
            return None
        growth = (state.h - state.g) - (past.h - past.g)
        small = state.sup_M + state.sup_A < rules.eps_d * (p.K1 + p.K2)
        if growth < rules.eps_g * self.h0 and small and R < 1 - rules.eps_R:
            self.fired = "vanishing"
            return "vanishing"
        return None

    def outcome(self, state) -> Outcome:
        label = {"spreading": Label.SPREADING, "vanishing": Label.VANISHING}.get(
            self.fired, Label.UNDECIDED)
        R = self.trace[-1][1] if self.trace else self.R0F(state.g, state.h)
        return Outcome(label, float(state.t), self.fired or "horizon", float(state.h - state.g),
                       state.sup_M, state.sup_A, float(R), list(self.trace))


def classify(trajectory: Trajectory, profile: CoefficientProfile, config: SolverConfig | None = None,
             rules: ClassifierRules = ClassifierRules()) -> Outcome:
    """Label a finished trajectory by replaying the stopping rules over its snapshots."""
    config = config or trajectory.config
    snaps = trajectory.snapshots
    h0 = snaps[0].h0
    clf = _Classifier(profile, h0, config.horizon, rules)
    for i, s in enumerate(snaps):
        if clf(s, snaps[: i + 1]):
            return clf.outcome(s)
    return clf.outcome(snaps[-1])


def simulate_and_classify(initial: InitialData, profile: CoefficientProfile, config: SolverConfig,
                          rules: ClassifierRules = ClassifierRules()):
    """Run with early stopping as soon as either rule fires."""
    clf = _Classifier(profile, initial.h0, config.horizon, rules)
    traj = run(initial, profile, config, stop=clf)
    return clf.outcome(traj.final), traj


@dataclass
class MuStarResult:
    mu_lo: float
    mu_hi: float
    runs: list[dict]
    vanishing: Outcome | None = None
    spreading: Outcome | None = None

    def to_dict(self) -> dict:
        return {"mu_lo": self.mu_lo, "mu_hi": self.mu_hi, "runs": self.runs}


def _decide(initial, profile, config, rules, mu, transcript, max_doublings=3):
    horizon = config.horizon
    for _ in range(max_doublings + 1):
        cfg = config.replace(mu=mu, horizon=horizon)
        out, _ = simulate_and_classify(initial, profile, cfg, rules)
        transcript.append({"mu": mu, "horizon": horizon, **out.to_dict()})
        if out.label is not Label.UNDECIDED:
            return out
        horizon *= 2
    return out


def find_mu_star(initial: InitialData, profile: CoefficientProfile, config: SolverConfig,
                 bracket: tuple[float, float], tol: float = 0.05,
                 rules: ClassifierRules = ClassifierRules()) -> MuStarResult:
    """Bisect on the expansion capability mu between a vanishing and a spreading run.

    Returns a bracket ``(mu_lo, mu_hi)`` with a certified Vanishing run at
    ``mu_lo`` and a certified Spreading run at ``mu_hi``; bisection stops when
    ``mu_hi - mu_lo < tol * mu_hi``.
    """
    R_init = compute_R0((-initial.h0, initial.h0), profile, rules.resolution).R0
    if R_init >= 1:
        return MuStarResult(0.0, 0.0, [{"note": "R0F(0) >= 1, spreading for every mu > 0",
                                        "R0F0": R_init}])
    lo, hi = map(float, bracket)
    if not 0 < lo < hi:
        raise InvalidBracket(f"need 0 < mu_lo < mu_hi, got {bracket}")
    runs: list[dict] = []
    out_lo = _decide(initial, profile, config, rules, lo, runs)
    if out_lo.label is not Label.VANISHING:
        raise InvalidBracket(f"mu_lo={lo} gives {out_lo.label.value}, expected Vanishing")
    out_hi = _decide(initial, profile, config, rules, hi, runs)
    if out_hi.label is not Label.SPREADING:
        raise InvalidBracket(f"mu_hi={hi} gives {out_hi.label.value}, expected Spreading")
    while hi - lo >= tol * hi:
        mid = 0.5 * (lo + hi)
        out = _decide(initial, profile, config, rules, mid, runs)
        if out.label is Label.VANISHING:
            lo, out_lo = mid, out
        elif out.label is Label.SPREADING:
            hi, out_hi = mid, out
        else:
            raise InconclusiveRegion(lo, hi, runs)
    return MuStarResult(lo, hi, runs, out_lo, out_hi)


def transcript_is_monotone(runs: list[dict]) -> bool:
    """Every decided Vanishing mu lies below every decided Spreading mu."""
    van = [r["mu"] for r in runs if r.get("label") == Label.VANISHING.value]
    spr = [r["mu"] for r in runs if r.get("label") == Label.SPREADING.value]
    return not van or not spr or max(van) < min(spr)


@dataclass
class PairVerdict:
    name: str
    front_violation: float
    density_violation: float
    cell: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "front_violation": self.front_violation,
            "density_violation": self.density_violation,
            "cell": self.cell,
            "passed": self.passed,
        }


def ordering_violation(lower: Trajectory, upper: Trajectory, K1: float,
                       density_tol: float = 1e-8) -> PairVerdict:
    """How far ``lower`` pokes above ``upper`` at shared output times.

    Fronts: ``max(h_lo - h_up, g_up - g_lo)``. Densities: ``max(M_lo - M_up)``
    at the lower run's nodes inside the common interval, with ``M_up`` from
    cubic interpolation unless both runs share the same nodes.
    """
    front = 0.0
    dens = 0.0
    cell = 0.0
    up_by_t = {round(s.t, 9): s for s in upper.snapshots}
    for a in lower.snapshots:
        b = up_by_t.get(round(a.t, 9))
        if b is None:
            continue
        cell = max(cell, float((b.h - b.g) / b.N), float((a.h - a.g) / a.N))
        front = max(front, a.h - b.h, b.g - a.g)
        lo_x, hi_x = max(a.g, b.g), min(a.h, b.h)
        x = a.x
        inside = (x >= lo_x) & (x <= hi_x)
        if np.array_equal(x, b.x):
            dens = max(dens, float(np.max(a.M - b.M)))
        elif np.any(inside):
            dens = max(dens, float(np.max(a.M[inside] - sample_field(b, x[inside], "M"))))
    passed = front <= cell and dens <= density_tol * K1
    return PairVerdict("", max(front, 0.0), max(dens, 0.0), cell, passed)


def comparison_suite(initial: InitialData, profile: CoefficientProfile, config: SolverConfig,
                     mus=(0.5, 1.0, 2.0), workers: int = 1) -> list[PairVerdict]:
    """Ordered-data and ordered-mu experiments; one verdict per ordered pair."""
    jobs = {
        "base": (initial, config),
        "half": (initial.scaled(0.5), config),
    }
    for mu in mus:
        jobs[f"mu={mu:g}"] = (initial, config.replace(mu=mu))

    def go(item):
        ini, cfg = item
        return run(ini, profile, cfg)

    names = list(jobs)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            trajs = dict(zip(names, ex.map(go, [jobs[n] for n in names])))
    else:
        trajs = {n: go(jobs[n]) for n in names}

    pairs = [("identical", "base", "base"), ("half-data", "half", "base")]
    ordered = sorted(mus)
    pairs += [(f"mu {a:g} <= {b:g}", f"mu={a:g}", f"mu={b:g}")
              for a, b in zip(ordered, ordered[1:])]
    verdicts = []
    for name, lo_key, hi_key in pairs:
        v = ordering_violation(trajs[lo_key], trajs[hi_key], profile.K1)
        v.name = name
        verdicts.append(v)
    return verdicts
