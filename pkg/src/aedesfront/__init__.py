"""Two-stage mosquito invasion with two free boundaries in a heterogeneous habitat."""

from .coefficients import (CoefficientProfile, ProfileSpec, check_assumption_H,
                           check_small_advection, evaluate_profile)
from .dynamics import (ClassifierRules, Label, Outcome, classify, comparison_suite,
                       find_mu_star, simulate_and_classify)
from .frontfix import (InitialData, SimulationState, SolverConfig, Trajectory,
                       reconstruct_A_integral, run, step, transform_to_fixed)
from .steady import close_A, solve_global, solve_truncated
from .threshold import R0F_trace, compute_lambda0, compute_R0, threshold_report

__version__ = "0.1.0"

__all__ = [
    "CoefficientProfile", "ProfileSpec", "check_assumption_H", "check_small_advection",
    "evaluate_profile", "ClassifierRules", "Label", "Outcome", "classify", "comparison_suite",
    "find_mu_star", "simulate_and_classify", "InitialData", "SimulationState", "SolverConfig",
    "Trajectory", "reconstruct_A_integral", "run", "step", "transform_to_fixed", "close_A",
    "solve_global", "solve_truncated", "R0F_trace", "compute_lambda0", "compute_R0",
    "threshold_report",
]
