"""Threshold index R0 on an interval, principal eigenvalue lambda0, R0F(t) trace.

R0**2 is the largest eigenvalue of the symmetric pencil ``W v = s L v`` where
``L = -D d2/dx2 + nu**2/(4D) + mu1`` (Dirichlet) and ``W = r gamma/(mu2+gamma)``
act on the gauged eigenfunction ``Psi = exp(-nu x/(2D)) phi``. Both are
discretized by central differences on a uniform grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg, optimize

from .coefficients import CoefficientProfile
from .errors import BracketFailure, DegenerateDomain, EigenNoConvergence

POWER_RTOL = 1e-12
POWER_MAXITER = 10_000
LAMBDA_XTOL = 1e-8


@dataclass
class ThresholdReport:
    interval: tuple[float, float]
    R0: float
    lambda0: float | None
    x: np.ndarray
    eigen_M: np.ndarray
    eigen_A: np.ndarray
    resolution: int
    iterations: int = 0

    def to_dict(self) -> dict:
        return {
            "interval": list(self.interval),
            "R0": self.R0,
            "lambda0": self.lambda0,
            "resolution": self.resolution,
            "x": self.x.tolist(),
            "eigen_M": self.eigen_M.tolist(),
            "eigen_A": self.eigen_A.tolist(),
        }


def _grid(interval, resolution):
    p, q = map(float, interval)
    if not q > p:
        raise DegenerateDomain(f"interval ({p}, {q}) is empty")
    if resolution < 16:
        raise ValueError("resolution must be at least 16 nodes")
    x = np.linspace(p, q, resolution)
    return x, x[1] - x[0]


def _pencil(x, dx, profile: CoefficientProfile):
    xi = x[1:-1]
    r, g, m1, m2 = profile.rates(xi)
    D, nu = profile.D, profile.nu
    diag = 2 * D / dx**2 + nu**2 / (4 * D) + m1
    off = np.full(xi.size - 1, -D / dx**2)
    w = r * g / (m2 + g)
    return diag, off, w, (r, g, m1, m2)


def _normalize_pair(phi, psi):
    # principal eigenvectors are one-signed; fix the sign and scale
    if phi.sum() < 0:
        phi, psi = -phi, -psi
    s = np.max(np.abs(phi)) + np.max(np.abs(psi))
    return phi / s, psi / s


def compute_R0(interval, profile: CoefficientProfile, resolution: int = 512) -> ThresholdReport:
    """Threshold R0 on ``interval`` by power iteration on ``L^-1 W``.

    The returned eigen pair solves the R0 eigenproblem:
    ``psi = r phi / (R0 (mu2 + gamma))``.
    """
    x, dx = _grid(interval, resolution)
    diag, off, w, (r, g, m1, m2) = _pencil(x, dx, profile)
    n = diag.size
    band = np.zeros((2, n))
    band[0] = diag
    band[1, :-1] = off
    chol = linalg.cholesky_banded(band, lower=True)

    def apply_L(v):
        out = diag * v
        out[:-1] += off * v[1:]
        out[1:] += off * v[:-1]
        return out

    v = np.ones(n)
    sigma = 0.0
    for it in range(1, POWER_MAXITER + 1):
        u = linalg.cho_solve_banded((chol, True), w * v)
        u /= np.linalg.norm(u)
        new = float(u @ (w * u)) / float(u @ apply_L(u))
        v = u
        if abs(new - sigma) <= POWER_RTOL * abs(new):
            sigma = new
            break
        sigma = new
    else:
        raise EigenNoConvergence(
            f"power iteration did not converge in {POWER_MAXITER} iterations on {interval}"
        )

    R0 = float(np.sqrt(sigma))
    phi = np.zeros_like(x)
    phi[1:-1] = np.exp(profile.nu * x[1:-1] / (2 * profile.D)) * v
    psi = np.zeros_like(x)
    psi[1:-1] = r * phi[1:-1] / (R0 * (m2 + g))
    phi, psi = _normalize_pair(phi, psi)
    return ThresholdReport((float(x[0]), float(x[-1])), R0, None, x, phi, psi, resolution, it)


def compute_R0_direct(interval, profile: CoefficientProfile, resolution: int = 512) -> float:
    """R0 from the un-gauged, non-symmetric discretization (dense solve).

    ``-D phi'' + nu phi' + mu1 phi = R0**-2 W phi`` with central differences.
    Independent cross-check of :func:`compute_R0`; O(n**3), keep n modest.
    """
    x, dx = _grid(interval, resolution)
    xi = x[1:-1]
    r, g, m1, m2 = profile.rates(xi)
    D, nu = profile.D, profile.nu
    n = xi.size
    Lmat = np.diag(2 * D / dx**2 + m1)
    Lmat += np.diag(np.full(n - 1, -D / dx**2 + nu / (2 * dx)), 1)
    Lmat += np.diag(np.full(n - 1, -D / dx**2 - nu / (2 * dx)), -1)
    w = r * g / (m2 + g)
    # W phi = s L phi  <=>  (W^-1 L) phi = (1/s) phi ; smallest real eigenvalue of W^-1 L
    ev = linalg.eigvals(Lmat / w[:, None])
    ev = ev[np.abs(ev.imag) < 1e-9 * np.abs(ev.real).max()].real
    return float(1.0 / np.sqrt(ev.min()))


def _kappa(lam, diag0, off, w_num, denom, want_vector=False):
    d = diag0 - w_num / (denom - lam)
    if want_vector:
        vals, vecs = linalg.eigh_tridiagonal(d, off, select="i", select_range=(0, 0))
        return vals[0], vecs[:, 0]
    vals = linalg.eigh_tridiagonal(d, off, eigvals_only=True, select="i", select_range=(0, 0))
    return vals[0]


@dataclass
class PrincipalPair:
    lambda0: float
    x: np.ndarray
    phi: np.ndarray
    psi: np.ndarray


def principal_eigenpair(interval, profile: CoefficientProfile, resolution: int = 512) -> PrincipalPair:
    """Principal eigenvalue lambda0 of the coupled linearized problem and its pair.

    Finds the fixed point ``kappa(lam) = lam`` by bisection, where ``kappa`` is
    the lowest eigenvalue of ``-D d2 + nu**2/(4D) + mu1 - r gamma/(mu2+gamma-lam)``.
    ``kappa(lam) - lam`` is strictly decreasing on the bracket, so the root is
    unique.
    """
    x, dx = _grid(interval, resolution)
    xi = x[1:-1]
    r, g, m1, m2 = profile.rates(xi)
    D, nu = profile.D, profile.nu
    diag0 = 2 * D / dx**2 + nu**2 / (4 * D) + m1
    off = np.full(xi.size - 1, -D / dx**2)
    w_num = r * g
    denom = m2 + g
    scale = float(max(r.max(), g.max(), m1.max(), m2.max()))
    lo = -10.0 * scale
    hi = float(denom.min()) - 1e-6

    def f(lam):
        return _kappa(lam, diag0, off, w_num, denom) - lam

    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo > 0 > f_hi):
        if f_lo == 0:
            root = lo
        elif f_hi == 0:
            root = hi
        else:
            raise BracketFailure("no sign change of kappa(lam) - lam", lo, hi, f_lo, f_hi)
    else:
        root = optimize.bisect(f, lo, hi, xtol=LAMBDA_XTOL, rtol=4 * np.finfo(float).eps,
                               maxiter=500)
    lam = float(root)
    _, vec = _kappa(lam, diag0, off, w_num, denom, want_vector=True)
    phi = np.zeros_like(x)
    phi[1:-1] = np.exp(nu * xi / (2 * D)) * vec
    psi = np.zeros_like(x)
    psi[1:-1] = r * phi[1:-1] / (denom - lam)
    phi, psi = _normalize_pair(phi, psi)
    return PrincipalPair(lam, x, phi, psi)


def compute_lambda0(interval, profile: CoefficientProfile, resolution: int = 512) -> float:
    return principal_eigenpair(interval, profile, resolution).lambda0


def threshold_report(interval, profile: CoefficientProfile, resolution: int = 512) -> ThresholdReport:
    """R0 together with lambda0 and the lambda0 eigen pair."""
    rep = compute_R0(interval, profile, resolution)
    pair = principal_eigenpair(interval, profile, resolution)
    rep.lambda0 = pair.lambda0
    rep.eigen_M, rep.eigen_A = pair.phi, pair.psi
    return rep


def closed_form_R0(profile: CoefficientProfile, length: float) -> float:
    """Exact R0 for constant coefficients on an interval of the given length."""
    r, g, m1, m2 = (s.limits[0] for s in (profile.r, profile.gamma, profile.mu1, profile.mu2))
    D, nu = profile.D, profile.nu
    return float(np.sqrt((r * g / (m2 + g)) / (D * (np.pi / length) ** 2 + nu**2 / (4 * D) + m1)))


def far_field_R0(profile: CoefficientProfile) -> float:
    """Lower bound for R0 on arbitrarily long intervals (nu**2/(4D) convention)."""
    num = profile.r_inf * profile.gamma_inf / (profile.mu2_inf + profile.gamma_inf)
    return float(np.sqrt(num / (profile.mu1_inf + profile.nu**2 / (4 * profile.D))))


def R0F_trace(trajectory, profile: CoefficientProfile, resolution: int = 256):
    """``[(t, R0 on (g(t), h(t)))]`` for every snapshot of ``trajectory``."""
    snaps = list(getattr(trajectory, "snapshots", trajectory))
    if not snaps:
        raise ValueError("trajectory has no snapshots")
    cache: dict[tuple[float, float], float] = {}
    out = []
    for s in snaps:
        key = (s.g, s.h)
        if key not in cache:
            cache[key] = compute_R0(key, profile, resolution).R0
        out.append((s.t, cache[key]))
    return out
