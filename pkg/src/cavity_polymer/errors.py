class QuadratureError(RuntimeError):
    """A numerical integral missed its tolerance.

    ``achieved`` carries the best error estimate that was reached.
    """

    def __init__(self, message, achieved=float("nan")):
        super().__init__(message)
        self.achieved = achieved


class McDiagnosticsError(RuntimeError):
    """A Monte Carlo estimate failed its reliability diagnostics."""


class SweepError(RuntimeError):
    """A grid point of a sweep failed; ``index`` locates it."""

    def __init__(self, index, value, cause):
        super().__init__(f"grid point {index} ({value!r}) failed: {cause}")
        self.index = index
        self.value = value
        self.cause = cause
