import numpy as np
import pytest

from aedesfront import CoefficientProfile, InitialData, ProfileSpec, SolverConfig


def bump_profile(nu=0.2):
    return CoefficientProfile(
        r=ProfileSpec.bump(1.0, 0.5, 0.0, 1.0),
        gamma=ProfileSpec.constant(1.0),
        mu1=ProfileSpec.constant(0.25),
        mu2=ProfileSpec.constant(1.0),
        D=1.0, nu=nu, K1=1.0, K2=1.0,
    )


def random_profile(rng):
    """Heterogeneous profile with random bumps and steps; limits shared on both sides."""
    base_r = rng.uniform(0.5, 2.0)
    r = ProfileSpec.bump(base_r, rng.uniform(-0.4, 1.0) * base_r, rng.uniform(-2, 2),
                         rng.uniform(0.3, 2.0))
    gamma = ProfileSpec.bump(rng.uniform(0.5, 2.0), rng.uniform(0, 1.0), rng.uniform(-2, 2),
                             rng.uniform(0.3, 2.0))
    mu1 = ProfileSpec.bump(rng.uniform(0.05, 0.5), rng.uniform(0, 0.5), rng.uniform(-2, 2),
                           rng.uniform(0.3, 2.0))
    mu2 = ProfileSpec.constant(rng.uniform(0.3, 2.0))
    return CoefficientProfile(r=r, gamma=gamma, mu1=mu1, mu2=mu2,
                              D=rng.uniform(0.2, 3.0), nu=rng.uniform(-0.8, 0.8))


@pytest.fixture
def hom():
    return CoefficientProfile.homogeneous(1.0, 1.0, 0.25, 1.0, D=1.0)


@pytest.fixture
def het():
    return bump_profile()


@pytest.fixture
def small_cfg():
    return SolverConfig(N=64, dt=0.02, mu=1.0, horizon=2.0, output_every=0.5)


@pytest.fixture
def hump():
    return InitialData.cosine(2.0, 0.5, 0.4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# Every accepted step taken anywhere in the suite is checked against the
# density bounds here, independently of the solver's own guard.
import aedesfront.frontfix as _ff

_solver_step = _ff.step
STEP_BOUNDS = {"steps": 0, "M_lo": np.inf, "M_hi": -np.inf, "A_lo": np.inf, "A_hi": -np.inf}


def _recording_step(state, profile, config, dt=None):
    new = _solver_step(state, profile, config, dt)
    b = STEP_BOUNDS
    b["steps"] += 1
    b["M_lo"] = min(b["M_lo"], float(new.M.min()) / profile.K1)
    b["M_hi"] = max(b["M_hi"], float(new.M.max()) / profile.K1)
    b["A_lo"] = min(b["A_lo"], float(new.A.min()) / profile.K2)
    b["A_hi"] = max(b["A_hi"], float(new.A.max()) / profile.K2)
    return new


_ff.step = _recording_step

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
    b = STEP_BOUNDS
    if b["steps"]:
        terminalreporter.write_line(
            f"density bounds over {b['steps']} solver steps: M/K1 in [{b['M_lo']:.3e}, "
            f"{b['M_hi']:.6f}], A/K2 in [{b['A_lo']:.3e}, {b['A_hi']:.6f}]")
