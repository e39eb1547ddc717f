"""Exception types shared across the sectorrelay modules."""


class ParameterError(ValueError):
    """One or more network parameters violate their admissible range.

    The message lists every violated invariant by name so callers can
    report all problems at once instead of fixing them one at a time.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a formula."""


class VacuousBoundError(DomainError):
    """The quadratic bound has no real root: the bound places no constraint."""


class QuadratureError(RuntimeError):
    """Numerical integration failed to converge within its budget."""


class OptimizationError(RuntimeError):
    """A numerical search failed (bad bracket, NaN objective, no progress)."""


class RootFindError(OptimizationError):
    """The stationarity system has no root inside the search box.

    Carries ``sign_map``, a coarse-grid table of residual signs that shows
    where (if anywhere) each residual changes sign.
    """

    def __init__(self, message, sign_map=None):
        super().__init__(message)
        self.sign_map = sign_map


class DegenerateSampleError(RuntimeError):
    """A sampled configuration is degenerate (e.g. zero-distance interferer)
    and the trial should be redrawn."""
