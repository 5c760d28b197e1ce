"""Exception types shared across the library.

Every error raised on purpose by this package derives from PassiveIsacError,
so callers can catch one base class at the CLI boundary.
"""


class PassiveIsacError(Exception):
    """Base class for all library errors."""


class ConfigError(PassiveIsacError):
    """A configuration value is missing, malformed, or inconsistent."""


class DimensionMismatch(PassiveIsacError):
    """Array shapes are inconsistent with the declared scenario dimensions."""


class DegenerateGeometry(PassiveIsacError):
    """A geometric construction collapses (parallel steering vectors, coincident nodes)."""


class NumericalFailure(PassiveIsacError):
    """A linear-algebra primitive failed to converge or produced non-finite values."""


class SingularGram(PassiveIsacError):
    """A Gram matrix is too ill-conditioned to invert reliably."""


class InsufficientTrials(PassiveIsacError):
    """Too few Monte Carlo trials for the requested tail quantile."""


class Infeasible(PassiveIsacError):
    """An optimization problem has no feasible point under the given constraints."""


class MaxIterations(PassiveIsacError):
    """An iterative routine hit its iteration cap without a usable result."""


class IllConditioned(PassiveIsacError):
    """A solver stalled or failed while computing a step."""


class RandomizationFailure(PassiveIsacError):
    """No candidate drawn during randomized rounding could be repaired to feasibility."""


class NonConvergence(PassiveIsacError):
    """A series or fixed-point iteration exhausted its term budget."""
