"""Bounded positive stationary solution via monotone iteration on [-L, L].

Eliminating A from the stationary system gives the scalar problem

    -D M'' + nu M' = F(x, M),
    F(x, M) = gamma r M / (r M / K2 + mu2 + gamma) * (1 - M / K1) - mu1 M,

with ``M(+-L) = 0``. Iterating ``(Lh + c) M_next = F(M) + c M`` from the
constant upper solution K1 and from a small multiple of the principal
eigenfunction brackets the unique positive solution from both sides.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from .coefficients import CoefficientProfile
from .errors import DegenerateDomain, SubcriticalDomain, UniquenessGapWarning
from .threshold import compute_R0

SWEEP_TOL = 1e-10
GAP_TOL = 1e-6
MAX_SWEEPS = 200_000


def close_A(M, x, profile: CoefficientProfile):
    """Nonnegative root of ``0 = r (1 - A/K2) M - (mu2 + gamma) A``."""
    r, g, _, m2 = profile.rates(x)
    M = np.asarray(M, dtype=float)
    out = r * M / (r * M / profile.K2 + m2 + g)
    return float(out) if np.ndim(out) == 0 else out


def reaction(M, x, profile: CoefficientProfile):
    r, g, m1, m2 = profile.rates(x)
    return g * r * M / (r * M / profile.K2 + m2 + g) * (1 - M / profile.K1) - m1 * M


def gauged_reaction_rate(u, x, profile: CoefficientProfile):
    """Per-unit-density reaction of ``u = exp(-nu x/(2D)) M``; decreasing in u > 0."""
    r, g, m1, m2 = profile.rates(x)
    D, nu = profile.D, profile.nu
    e = np.exp(nu * np.asarray(x) / (2 * D))
    return (-nu**2 / (4 * D) + g * r / (r * e * u / profile.K2 + m2 + g)
            * (1 - e * u / profile.K1) - m1)


@dataclass
class StationarySolution:
    L: float
    x: np.ndarray
    M_star: np.ndarray
    A_star: np.ndarray
    residual: float
    gap: float = 0.0
    sweeps: int = 0
    lower: np.ndarray | None = field(default=None, repr=False)


class _Operator:
    """``-D d2 + nu d1`` on interior nodes; central when the cell Peclet number allows."""

    def __init__(self, x, profile: CoefficientProfile):
        dx = x[1] - x[0]
        D, nu = profile.D, profile.nu
        if abs(nu) * dx < 2 * D:
            lo = -D / dx**2 - nu / (2 * dx)
            up = -D / dx**2 + nu / (2 * dx)
        else:
            lo = -D / dx**2 - max(nu, 0.0) / dx
            up = -D / dx**2 - max(-nu, 0.0) / dx
        self.lo, self.up, self.diag = lo, up, -(lo + up)
        self.n = x.size - 2

    def apply(self, v):
        # v holds interior values, zero Dirichlet data
        out = self.diag * v
        out[1:] += self.lo * v[:-1]
        out[:-1] += self.up * v[1:]
        return out

    def banded(self, shift):
        ab = np.zeros((3, self.n))
        ab[0, 1:] = self.up
        ab[1] = self.diag + shift
        ab[2, :-1] = self.lo
        return ab

    def tridiag(self):
        return self.lo, self.diag, self.up


def _discrete_principal(op: _Operator, x, profile: CoefficientProfile):
    """lambda0 and phi for the same discrete operator used in the sweeps."""
    xi = x[1:-1]
    r, g, m1, m2 = profile.rates(xi)
    lo, diag, up = op.tridiag()
    # diagonal similarity turns the central/upwind operator into a symmetric one
    ratio = lo / up
    off = np.full(op.n - 1, -np.sqrt(lo * up))
    denom = m2 + g
    base = diag + m1

    def kappa(lam, vec=False):
        d = base - r * g / (denom - lam)
        if vec:
            return linalg.eigh_tridiagonal(d, off, select="i", select_range=(0, 0))
        return linalg.eigh_tridiagonal(d, off, eigvals_only=True, select="i",
                                       select_range=(0, 0))[0]

    lo_b = -10 * float(max(r.max(), g.max(), m1.max(), m2.max()))
    hi_b = float(denom.min()) - 1e-9
    lam = optimize.bisect(lambda s: kappa(s) - s, lo_b, hi_b, xtol=1e-12, maxiter=500)
    _, vec = kappa(lam, vec=True)
    # undo the similarity: phi_j = ratio**(j/2) * v_j
    phi = vec[:, 0] * np.sqrt(ratio) ** np.arange(op.n)
    if phi.sum() < 0:
        phi = -phi
    phi = np.abs(phi)
    psi = r * phi / (denom - lam)
    s = phi.max() + psi.max()
    return lam, phi / s


def _sweep(M, op, ab, shift, x, profile):
    rhs = reaction(M, x, profile) + shift * M
    return linalg.solve_banded((1, 1), ab, rhs, check_finite=False)


def solve_truncated(L: float, profile: CoefficientProfile, resolution: int = 801,
                    check_threshold: bool = True, tol: float = SWEEP_TOL,
                    trace: list | None = None) -> StationarySolution:
    """Positive solution on ``[-L, L]`` sandwiched by monotone iteration.

    ``resolution`` counts grid nodes including both endpoints. Pass a list as
    ``trace`` to collect ``(upper, lower)`` interior iterates after every sweep.
    """
    if L <= 0:
        raise DegenerateDomain("L must be positive")
    if check_threshold:
        R0 = compute_R0((-L, L), profile, max(resolution, 16)).R0
        if R0 <= 1:
            raise SubcriticalDomain(f"R0 on (-{L}, {L}) is {R0:.6g} <= 1; no positive solution")
    x = np.linspace(-L, L, resolution)
    xi = x[1:-1]
    op = _Operator(x, profile)
    r, g, m1, m2 = profile.rates(xi)
    # makes F(M) + shift*M nondecreasing in M on [0, K1]
    shift = float(np.max(g * r / (m2 + g) + g * profile.K2 / profile.K1 + m1))
    ab = op.banded(shift)

    lam, phi = _discrete_principal(op, x, profile)
    if lam >= 0:
        raise SubcriticalDomain(f"principal eigenvalue {lam:.3e} >= 0 on (-{L}, {L})")
    K = min(profile.K1, profile.K2)
    delta = min(0.1, abs(lam) * K / (2 * float(r.max())))
    for _ in range(60):
        lower = delta * phi
        if np.all(op.apply(lower) <= reaction(lower, xi, profile)):
            break
        delta *= 0.5
    else:
        raise SubcriticalDomain("could not build a lower solution from the eigenfunction")

    upper = np.full(xi.size, profile.K1)
    if trace is not None:
        trace.append((upper.copy(), lower.copy()))
    sweeps = 0
    done_u = done_l = False
    while not (done_u and done_l):
        sweeps += 1
        if sweeps > MAX_SWEEPS:
            raise RuntimeError("monotone iteration did not settle")
        if not done_u:
            nu_ = _sweep(upper, op, ab, shift, xi, profile)
            done_u = np.max(np.abs(nu_ - upper)) < tol
            upper = nu_
        if not done_l:
            nl = _sweep(lower, op, ab, shift, xi, profile)
            done_l = np.max(np.abs(nl - lower)) < tol
            lower = nl
        if trace is not None:
            trace.append((upper.copy(), lower.copy()))

    gap = float(np.max(np.abs(upper - lower)))
    if gap > GAP_TOL:
        warnings.warn(f"upper and lower limits differ by {gap:.3e}", UniquenessGapWarning)
    M = np.zeros_like(x)
    M[1:-1] = upper
    lower_full = np.zeros_like(x)
    lower_full[1:-1] = lower
    res = float(np.max(np.abs(op.apply(upper) - reaction(upper, xi, profile))))
    return StationarySolution(float(L), x, M, close_A(M, x, profile), res, gap, sweeps, lower_full)


@dataclass
class GlobalSolution:
    solution: StationarySolution
    table: list[dict]
    converged: bool
    window: float
    solutions: list[StationarySolution] = field(default_factory=list, repr=False)


def default_L_sequence(profile: CoefficientProfile, levels: int = 5, resolution: int = 256):
    """``L0 * 2**k`` with ``L0`` the smallest dyadic length whose R0 exceeds 1.05."""
    L0 = 2.0**-4
    while compute_R0((-L0, L0), profile, resolution).R0 <= 1.05:
        L0 *= 2
        if L0 > 2**12:
            raise SubcriticalDomain("R0 never exceeds 1.05; see check_assumption_H")
    return [L0 * 2**k for k in range(levels)]


def solve_global(profile: CoefficientProfile, dx: float = 0.05, L_sequence=None,
                 window: float = 5.0, tol: float = 1e-6) -> GlobalSolution:
    """Solve on growing truncations sharing one grid spacing ``dx``.

    Each ``L`` is snapped to a multiple of ``dx`` so grids nest and the
    truncated solutions can be compared node by node.
    """
    if L_sequence is None:
        L_sequence = default_L_sequence(profile)
    Ls = [float(L) for L in L_sequence]
    if not Ls or any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise ValueError("L_sequence must be nonempty and strictly increasing")
    Ls = [dx * round(L / dx) for L in Ls]
    sols = []
    table = []
    prev = None
    for L in Ls:
        n = int(round(2 * L / dx)) + 1
        sol = solve_truncated(L, profile, n)
        row = {"L": L, "sup_diff": None, "residual": sol.residual, "monotone_violation": None}
        if prev is not None:
            # nodes of the previous (shorter) grid inside the new grid
            off = int(round((L - prev.L) / dx))
            shared = sol.M_star[off:off + prev.x.size]
            row["monotone_violation"] = float(max(0.0, np.max(prev.M_star - shared)))
            win = np.abs(prev.x) <= window + 1e-12
            row["sup_diff"] = float(np.max(np.abs(shared[win] - prev.M_star[win])))
        table.append(row)
        sols.append(sol)
        prev = sol
    converged = len(table) > 1 and table[-1]["sup_diff"] < tol
    return GlobalSolution(sols[-1], table, converged, window, sols)
