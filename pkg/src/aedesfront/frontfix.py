"""Time stepping of the two-front winged/aquatic system on a fixed grid.

The moving habitat ``[g(t), h(t)]`` is mapped onto ``[-h0, h0]`` by

    y = 2 h0 x / (h - g) - h0 (h + g) / (h - g),

so that ``w(t, y) = M(t, x)`` obeys a fixed-domain parabolic equation with
diffusion ``4 h0**2 D / (h - g)**2`` and drift

    y (h' - g') / (h - g) + h0 (h' + g') / (h - g) - 2 nu h0 / (h - g).

One step: fronts move first (Stefan condition, lagged one-sided slopes), then
``w`` is advanced with implicit diffusion/drift and explicit reaction, then
``A`` is carried to the new physical node positions and integrated exactly
for the frozen new ``M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy import integrate, linalg

from .coefficients import CoefficientProfile
from .errors import (
    DegenerateDomain,
    InvalidInitialData,
    MissingHistory,
    NumericalBlowup,
    SchemeInstability,
)

BOUND_RTOL = 1e-10


@dataclass
class SimulationState:
    t: float
    g: float
    h: float
    M: np.ndarray
    A: np.ndarray
    h0: float

    @property
    def N(self) -> int:
        return self.M.size - 1

    @property
    def y(self) -> np.ndarray:
        return np.linspace(-self.h0, self.h0, self.M.size)

    @property
    def x(self) -> np.ndarray:
        return computational_to_physical(self.y, self.g, self.h, self.h0)

    @property
    def sup_M(self) -> float:
        return float(np.max(self.M))

    @property
    def sup_A(self) -> float:
        return float(np.max(self.A))

    def copy(self) -> SimulationState:
        return replace(self, M=self.M.copy(), A=self.A.copy())


def computational_to_physical(y, g, h, h0):
    return 0.5 * (h + g) + (h - g) / (2 * h0) * np.asarray(y)


def physical_to_computational(x, g, h, h0):
    if not h > g:
        raise DegenerateDomain(f"front positions g={g}, h={h} do not bound an interval")
    return 2 * h0 * np.asarray(x) / (h - g) - h0 * (h + g) / (h - g)


@dataclass
class FixedView:
    y: np.ndarray
    x: np.ndarray
    w: np.ndarray
    advection: np.ndarray
    diffusion: float


def transform_to_fixed(state: SimulationState, profile: CoefficientProfile,
                       g_dot: float = 0.0, h_dot: float = 0.0) -> FixedView:
    """Coefficients of the fixed-domain equation for the current geometry."""
    g, h, h0 = state.g, state.h, state.h0
    if not h > g:
        raise DegenerateDomain(f"front positions g={g}, h={h} do not bound an interval")
    y = state.y
    width = h - g
    adv = y * (h_dot - g_dot) / width + h0 * (h_dot + g_dot) / width - 2 * profile.nu * h0 / width
    diff = 4 * h0**2 * profile.D / width**2
    return FixedView(y, state.x, state.M, adv, diff)


@dataclass
class InitialData:
    """Initial densities on ``[-h0, h0]``; callables of x."""

    h0: float
    M0: Callable
    A0: Callable
    label: str = "custom"
    params: dict = field(default_factory=dict)

    @classmethod
    def cosine(cls, h0: float, a: float, b: float) -> InitialData:
        """``M0 = a cos(pi x / (2 h0))``, ``A0 = b cos(pi x / (2 h0))``."""
        k = math.pi / (2 * h0)
        return cls(
            h0,
            lambda x: a * np.cos(k * np.asarray(x)),
            lambda x: b * np.cos(k * np.asarray(x)),
            "cosine",
            {"a": a, "b": b},
        )

    @classmethod
    def tabulated(cls, xs, M_values, A_values) -> InitialData:
        xs = np.asarray(xs, dtype=float)
        Mv = np.asarray(M_values, dtype=float)
        Av = np.asarray(A_values, dtype=float)
        h0 = float(xs[-1])
        if not np.isclose(xs[0], -h0):
            raise InvalidInitialData("tabulated initial data must span [-h0, h0]")
        return cls(
            h0,
            lambda x: np.interp(x, xs, Mv),
            lambda x: np.interp(x, xs, Av),
            "tabulated",
            {},
        )

    def scaled(self, factor: float) -> InitialData:
        M0, A0 = self.M0, self.A0
        params = {k: v * factor for k, v in self.params.items()}
        return InitialData(self.h0, lambda x: factor * M0(x), lambda x: factor * A0(x),
                           self.label, params)

    def sample(self, N: int, profile: CoefficientProfile) -> SimulationState:
        if self.h0 <= 0:
            raise InvalidInitialData("h0 must be positive")
        x = np.linspace(-self.h0, self.h0, N + 1)
        M = np.asarray(self.M0(x), dtype=float).copy()
        A = np.asarray(self.A0(x), dtype=float).copy()
        tol = 1e-12
        if abs(M[0]) > tol * profile.K1 or abs(M[-1]) > tol * profile.K1 \
                or abs(A[0]) > tol * profile.K2 or abs(A[-1]) > tol * profile.K2:
            raise InvalidInitialData("initial densities must vanish at x = +-h0")
        if not (np.all(M[1:-1] > 0) and np.all(M[1:-1] < profile.K1)):
            raise InvalidInitialData("need 0 < M0 < K1 in the interior")
        if not (np.all(A[1:-1] > 0) and np.all(A[1:-1] < profile.K2)):
            raise InvalidInitialData("need 0 < A0 < K2 in the interior")
        M[[0, -1]] = 0.0
        A[[0, -1]] = 0.0
        return SimulationState(0.0, -self.h0, self.h0, M, A, self.h0)

    def c1_norm(self, n: int = 4001) -> float:
        x = np.linspace(-self.h0, self.h0, n)
        M = np.asarray(self.M0(x), dtype=float)
        return float(np.max(np.abs(M)) + np.max(np.abs(np.gradient(M, x))))


@dataclass
class SolverConfig:
    N: int = 256
    dt: float | None = 0.01
    cfl: float | None = None
    mu: float = 1.0
    horizon: float = 10.0
    output_every: float = 0.5
    stencil_order: int = 2
    advection: str = "hybrid"

    def __post_init__(self):
        if self.N < 16 or self.N % 2:
            raise ValueError("N must be an even integer >= 16")
        if (self.dt is None) == (self.cfl is None):
            raise ValueError("set exactly one of dt (fixed step) and cfl (dt = cfl * dy**2)")
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if self.horizon < 0 or self.output_every <= 0:
            raise ValueError("horizon must be >= 0 and output_every > 0")
        if self.stencil_order not in (1, 2):
            raise ValueError("stencil_order must be 1 or 2")
        if self.advection not in ("hybrid", "upwind"):
            raise ValueError("advection must be 'hybrid' or 'upwind'")
        if self.dt is not None and self.dt <= 0 or self.cfl is not None and self.cfl <= 0:
            raise ValueError("time step must be positive")

    def time_step(self, h0: float) -> float:
        if self.dt is not None:
            return float(self.dt)
        return float(self.cfl * (2 * h0 / self.N) ** 2)

    def replace(self, **changes) -> SolverConfig:
        return replace(self, **changes)


def boundary_slopes(state: SimulationState, order: int = 2) -> tuple[float, float]:
    """Physical ``M_x`` at ``g`` and at ``h`` from one-sided differences."""
    w = state.M
    dy = 2 * state.h0 / state.N
    scale = 2 * state.h0 / (state.h - state.g)
    if order == 2:
        left = (-3 * w[0] + 4 * w[1] - w[2]) / (2 * dy)
        right = (3 * w[-1] - 4 * w[-2] + w[-3]) / (2 * dy)
    else:
        left = (w[1] - w[0]) / dy
        right = (w[-1] - w[-2]) / dy
    return left * scale, right * scale


def front_speeds(state: SimulationState, mu: float, order: int = 2) -> tuple[float, float]:
    """``(g', h')`` from the Stefan conditions; clipped to keep fronts monotone."""
    mx_g, mx_h = boundary_slopes(state, order)
    return min(-mu * mx_g, 0.0), max(-mu * mx_h, 0.0)


def _lagrange4(f, xi):
    """Cubic Lagrange interpolation of nodal values ``f`` at fractional indices ``xi``."""
    n = f.size
    base = np.clip(np.floor(xi).astype(int) - 1, 0, n - 4)
    s = xi - base
    f0, f1, f2, f3 = f[base], f[base + 1], f[base + 2], f[base + 3]
    return (
        -f0 * (s - 1) * (s - 2) * (s - 3) / 6
        + f1 * s * (s - 2) * (s - 3) / 2
        - f2 * s * (s - 1) * (s - 3) / 2
        + f3 * s * (s - 1) * (s - 2) / 6
    )


def _check_bounds(name, v, K):
    if not np.all(np.isfinite(v)):
        raise NumericalBlowup(f"{name} became non-finite")
    lo, hi = float(v.min()), float(v.max())
    if lo < -BOUND_RTOL * K or hi > K * (1 + BOUND_RTOL):
        raise SchemeInstability(
            f"{name} left [0, {K}] (min {lo:.3e}, max {hi:.3e}); try a smaller time step"
        )


def step(state: SimulationState, profile: CoefficientProfile, config: SolverConfig,
         dt: float | None = None) -> SimulationState:
    """Advance ``state`` by one time step."""
    if dt is None:
        dt = config.time_step(state.h0)
    N, h0 = state.N, state.h0
    dy = 2 * h0 / N
    w, A = state.M, state.A
    x_old = state.x

    g_dot, h_dot = front_speeds(state, config.mu, config.stencil_order)
    g_new = state.g + dt * g_dot
    h_new = state.h + dt * h_dot
    new = SimulationState(state.t + dt, g_new, h_new, w, A, h0)
    view = transform_to_fixed(new, profile, g_dot, h_dot)
    x_new = view.x

    # explicit reaction at the old nodes
    _, gam, m1, _ = profile.rates(x_old[1:-1])
    wi, Ai = w[1:-1], A[1:-1]
    rhs = wi + dt * (gam * Ai * (1 - wi / profile.K1) - m1 * wi)

    # implicit diffusion + drift, Dirichlet zeros at both ends
    a = view.advection[1:-1]
    B = view.diffusion
    if config.advection == "hybrid":
        central = np.abs(a) * dy <= 2 * B
    else:
        central = np.zeros(a.shape, dtype=bool)
    up = np.where(central, B / dy**2 + a / (2 * dy), B / dy**2 + np.maximum(a, 0) / dy)
    lo = np.where(central, B / dy**2 - a / (2 * dy), B / dy**2 + np.maximum(-a, 0) / dy)
    n = wi.size
    ab = np.zeros((3, n))
    ab[0, 1:] = -dt * up[:-1]
    ab[1] = 1 + dt * (up + lo)
    ab[2, :-1] = -dt * lo[1:]
    w_new = np.zeros_like(w)
    w_new[1:-1] = linalg.solve_banded((1, 1), ab, rhs, check_finite=False)

    # carry A to the new physical nodes, then integrate its local ODE exactly
    xi = (x_new - x_old[0]) / (x_old[1] - x_old[0])
    A_t = np.zeros_like(A)
    A_t[1:-1] = np.clip(_lagrange4(A, xi[1:-1]), 0.0, profile.K2)
    r, gam, _, m2 = profile.rates(x_new[1:-1])
    Mn = w_new[1:-1]
    k = r * Mn / profile.K2 + m2 + gam
    A_eq = r * Mn / k
    A_new = np.zeros_like(A)
    A_new[1:-1] = A_eq + (A_t[1:-1] - A_eq) * np.exp(-k * dt)

    w_new[[0, -1]] = 0.0
    A_new[[0, -1]] = 0.0
    _check_bounds("M", w_new, profile.K1)
    _check_bounds("A", A_new, profile.K2)
    return SimulationState(state.t + dt, g_new, h_new, w_new, A_new, h0)


@dataclass
class Trajectory:
    snapshots: list[SimulationState]
    dt: float
    config: SolverConfig
    stop_reason: str = "horizon"
    history: list[tuple[float, np.ndarray, np.ndarray, np.ndarray]] | None = None

    @property
    def final(self) -> SimulationState:
        return self.snapshots[-1]

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    @property
    def g(self) -> np.ndarray:
        return np.array([s.g for s in self.snapshots])

    @property
    def h(self) -> np.ndarray:
        return np.array([s.h for s in self.snapshots])

    def records(self) -> list[dict]:
        return [
            {"t": s.t, "g": s.g, "h": s.h, "sup_M": s.sup_M, "sup_A": s.sup_A}
            for s in self.snapshots
        ]

    def __len__(self):
        return len(self.snapshots)


def run(initial: InitialData, profile: CoefficientProfile, config: SolverConfig,
        stop: Callable[[SimulationState, list], str | None] | None = None,
        keep_history: bool = False) -> Trajectory:
    """Integrate up to ``config.horizon`` and return output snapshots.

    ``stop(state, snapshots)`` is polled at each output time; a non-empty
    return value ends the run early and is recorded as ``stop_reason``.
    With ``keep_history`` every accepted step is stored as ``(t, x, M, A)``.
    """
    state = initial.sample(config.N, profile)
    dt = config.time_step(initial.h0)
    n_steps = int(round(config.horizon / dt))
    every = max(1, int(round(config.output_every / dt)))
    snaps = [state.copy()]
    history = [(state.t, state.x, state.M.copy(), state.A.copy())] if keep_history else None
    traj = Trajectory(snaps, dt, config, "horizon", history)
    if stop is not None:
        reason = stop(state, snaps)
        if reason:
            traj.stop_reason = reason
            return traj
    for i in range(1, n_steps + 1):
        state = step(state, profile, config, dt)
        state.t = i * dt
        if keep_history:
            history.append((state.t, state.x, state.M, state.A))
        if i % every == 0 or i == n_steps:
            snaps.append(state.copy())
            if stop is not None:
                reason = stop(state, snaps)
                if reason:
                    traj.stop_reason = reason
                    break
    return traj


def sample_field(state: SimulationState, x, which: str = "M") -> np.ndarray:
    """Cubic interpolation of a density at physical points; zero outside ``[g, h]``."""
    from scipy.interpolate import CubicSpline

    x = np.asarray(x, dtype=float)
    v = state.M if which == "M" else state.A
    spline = CubicSpline(state.x, v)
    out = np.where((x >= state.g) & (x <= state.h), spline(np.clip(x, state.g, state.h)), 0.0)
    return out


def reconstruct_A_integral(times, M_at_x, A0: float, profile: CoefficientProfile, x: float,
                           t: float | None = None) -> float:
    """Aquatic density at fixed ``x`` from the winged history ``M(tau, x)``.

    Evaluates

        A(t) = exp(-(r/K2) I(t) - k t) A0
               + int_0^t r M(tau) exp((r/K2)(I(tau) - I(t)) + k (tau - t)) dtau,

    with ``I(t) = int_0^t M``, ``k = mu2 + gamma`` at ``x``, using trapezoid
    quadrature on the supplied time nodes.
    """
    times = np.asarray(times, dtype=float)
    M = np.asarray(M_at_x, dtype=float)
    if times.size == 0 or times.size != M.size:
        raise MissingHistory("need matching, nonempty time and M histories")
    if t is None:
        t = float(times[-1])
    if t < times[0] or t > times[-1] + 1e-12 * max(1.0, abs(t)):
        raise MissingHistory(f"history covers [{times[0]}, {times[-1]}], asked for t={t}")
    if t == times[0]:
        return float(A0)
    keep = times <= t
    ts, Ms = times[keep], M[keep]
    if ts[-1] < t:
        ts = np.append(ts, t)
        Ms = np.append(Ms, np.interp(t, times, M))
    r, gam, _, m2 = (float(v) for v in profile.rates(x))
    k = m2 + gam
    I = integrate.cumulative_trapezoid(Ms, ts, initial=0.0)
    expo = (r / profile.K2) * (I - I[-1]) + k * (ts - t)
    decay = math.exp(-(r / profile.K2) * I[-1] - k * (t - ts[0]))
    return float(decay * A0 + integrate.trapezoid(r * Ms * np.exp(expo), ts))


def history_at(trajectory: Trajectory, x: float):
    """``(times, M(t, x), A(t, x))`` along the stored step history (linear in space)."""
    if trajectory.history is None:
        raise MissingHistory("run with keep_history=True to reconstruct A")
    ts = np.array([rec[0] for rec in trajectory.history])
    Ms = np.array([np.interp(x, rec[1], rec[2], left=0.0, right=0.0) for rec in trajectory.history])
    As = np.array([np.interp(x, rec[1], rec[3], left=0.0, right=0.0) for rec in trajectory.history])
    return ts, Ms, As


def front_speed_bound(initial: InitialData, profile: CoefficientProfile, mu: float) -> float:
    """Upper bound on ``|g'|`` and ``h'``: ``2 mu K1 C1`` with

    ``C1 = max(1/(2 h0), nu/D + sqrt(K1/(2D)), 4 ||M0||_C1 / (3 K1))``.
    """
    D, K1 = profile.D, profile.K1
    c1 = max(1 / (2 * initial.h0), abs(profile.nu) / D + math.sqrt(K1 / (2 * D)),
             4 * initial.c1_norm() / (3 * K1))
    return 2 * mu * K1 * c1
