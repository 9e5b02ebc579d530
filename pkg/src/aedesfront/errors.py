"""Exception types raised across the package."""

from __future__ import annotations


class AedesFrontError(Exception):
    """Base class for all package errors."""


class InvalidProfile(AedesFrontError, ValueError):
    pass


class DegenerateDomain(AedesFrontError, ValueError):
    pass


class InvalidInitialData(AedesFrontError, ValueError):
    pass


class NumericalFailure(AedesFrontError, RuntimeError):
    """Any failure of a numerical routine (CLI exit code 3)."""


class SchemeInstability(NumericalFailure):
    """Discrete bounds violated; usually cured by a smaller time step."""


class NumericalBlowup(NumericalFailure):
    pass


class MissingHistory(AedesFrontError, ValueError):
    pass


class EigenNoConvergence(NumericalFailure):
    pass


class BracketFailure(NumericalFailure):
    def __init__(self, message: str, lo: float, hi: float, f_lo: float, f_hi: float):
        super().__init__(f"{message} (f({lo:.6g})={f_lo:.6g}, f({hi:.6g})={f_hi:.6g})")
        self.lo, self.hi, self.f_lo, self.f_hi = lo, hi, f_lo, f_hi


class SubcriticalDomain(AedesFrontError, ValueError):
    pass


class UniquenessGapWarning(UserWarning):
    pass


class InvalidBracket(AedesFrontError, ValueError):
    pass


class InconclusiveRegion(NumericalFailure):
    def __init__(self, mu_lo: float, mu_hi: float, transcript: list):
        super().__init__(
            f"classification stayed Undecided inside ({mu_lo:.6g}, {mu_hi:.6g})"
        )
        self.mu_lo = mu_lo
        self.mu_hi = mu_hi
        self.transcript = transcript


class ConfigError(AedesFrontError, ValueError):
    """Aggregated configuration problems; ``problems`` lists every violation."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))
