import warnings

import numpy as np
import pytest

from aedesfront import close_A, solve_global, solve_truncated
from aedesfront.errors import SubcriticalDomain, UniquenessGapWarning
from aedesfront.steady import _Operator, default_L_sequence, gauged_reaction_rate, reaction

from conftest import bump_profile


def test_close_A_examples(hom):
    assert close_A(0.0, 0.0, hom) == 0.0
    # r = K2 = 1, mu2 + gamma = 1
    p = hom.replace(mu2=hom.mu2.constant(0.5), gamma=hom.gamma.constant(0.5))
    assert close_A(1.0, 0.0, p) == pytest.approx(0.5)
    assert close_A(1e6, 0.0, hom) < hom.K2


def test_subcritical(hom):
    with pytest.raises(SubcriticalDomain):
        solve_truncated(1.0, hom, 201)


@pytest.fixture(scope="module")
def het_solution():
    trace = []
    sol = solve_truncated(10.0, bump_profile(), 401, trace=trace)
    return sol, trace


def test_residual_and_gap(het_solution):
    sol, _ = het_solution
    assert sol.residual < 1e-8
    assert sol.gap < 1e-6
    assert np.all(sol.M_star[1:-1] > 0) and sol.M_star.max() < 1


def test_sandwich(het_solution):
    _, trace = het_solution
    eps = 1e-14
    for (u, l), (u2, l2) in zip(trace, trace[1:]):
        assert np.all(l <= u + eps)
        assert np.all(u2 <= u + eps)
        assert np.all(l2 >= l - eps)


def test_closure_consistency(het_solution):
    sol, _ = het_solution
    p = bump_profile()
    r, g, _, m2 = p.rates(sol.x)
    res = r * (1 - sol.A_star / p.K2) * sol.M_star - (m2 + g) * sol.A_star
    assert np.max(np.abs(res)) < 1e-12


def test_gauged_rate_decreasing(het_solution):
    sol, _ = het_solution
    p = bump_profile()
    u_star = np.exp(-p.nu * sol.x / (2 * p.D)) * sol.M_star
    idx = np.linspace(1, sol.x.size - 2, 100).astype(int)
    for i in idx:
        u = np.linspace(0, u_star[i], 50)[1:]
        f = gauged_reaction_rate(u, sol.x[i], p)
        assert np.all(np.diff(f) < 0)


def test_even_without_advection():
    sol = solve_truncated(8.0, bump_profile(nu=0.0), 321)
    assert np.allclose(sol.M_star, sol.M_star[::-1], atol=1e-9)


def test_discrete_equation_holds(het_solution):
    sol, _ = het_solution
    p = bump_profile()
    op = _Operator(sol.x, p)
    lhs = op.apply(sol.M_star[1:-1])
    assert np.max(np.abs(lhs - reaction(sol.M_star[1:-1], sol.x[1:-1], p))) < 1e-8


def test_no_gap_warning(het):
    with warnings.catch_warnings():
        warnings.simplefilter("error", UniquenessGapWarning)
        solve_truncated(6.0, het, 241)


def test_global_monotone_and_converging(het):
    g = solve_global(het, 0.05, [10, 20, 40, 80], tol=1e-5)
    rows = g.table
    assert rows[0]["sup_diff"] is None
    assert all(r["monotone_violation"] <= 1e-9 for r in rows[1:])
    diffs = [r["sup_diff"] for r in rows[1:]]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))
    assert g.converged


def test_global_singleton(het):
    g = solve_global(het, 0.1, [6.0])
    s = solve_truncated(6.0, het, 121)
    assert np.array_equal(g.solution.M_star, s.M_star)
    assert not g.converged


def test_global_rejects_non_increasing(het):
    with pytest.raises(ValueError):
        solve_global(het, 0.1, [8.0, 4.0])


def test_default_L_sequence(het):
    seq = default_L_sequence(het)
    assert len(seq) == 5 and all(b == 2 * a for a, b in zip(seq, seq[1:]))
