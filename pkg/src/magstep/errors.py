"""Exception types shared across the package.

Everything raised on purpose derives from MagstepError so callers can catch
one base class at API boundaries (the CLI maps these to exit code 1).
"""


class MagstepError(Exception):
    pass


class ParameterRange(MagstepError):
    """A parameter is outside the range the model is defined on."""


class NotHermitian(MagstepError):
    """Assembled operator fails the Hermitian symmetry check."""


class NonConvergence(MagstepError):
    """Eigensolver exhausted its iteration budget.

    Carries the iteration count and the best residual seen so callers can
    decide whether to retry on a finer mesh or a bigger box.
    """

    def __init__(self, iterations: int, best_residual: float):
        self.iterations = iterations
        self.best_residual = best_residual
        super().__init__(
            f"no eigenpair to tolerance after {iterations} iterations "
            f"(best residual {best_residual:.3e})"
        )


class GaugeDiscontinuity(MagstepError):
    """Vector potential jumps across an interface link by more than tolerated."""


class GridTooSmall(MagstepError):
    """Eigenfunction mass near an artificial wall exceeds the certification cap."""


class MinimizerNotBracketed(MagstepError):
    """Scan found no interior minimum to hand to golden-section refinement."""


class MonotonicityViolation(MagstepError):
    """A profile that must be monotone decreased beyond tolerance."""


class NotBelowEssential(MagstepError):
    """Requested bound state, but the computed level is not below the essential spectrum."""


class TailTooShort(MagstepError):
    """Too few usable shells to fit a decay rate."""


class AssumptionFails(MagstepError):
    """Localization assumption does not hold, so the prediction is undefined."""
