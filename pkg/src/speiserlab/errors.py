"""Exception types shared across the package."""


class SpeiserLabError(Exception):
    """Base class for all package errors."""


class GraphError(SpeiserLabError):
    """Structural violation in a rotation-system graph."""


class ScheduleError(SpeiserLabError):
    """Invalid growth schedule (even length, too short, ...)."""


class RefinementError(SpeiserLabError):
    """Refinement map or transfer precondition violation."""


class FrontierError(SpeiserLabError):
    """An estimator reached the truncation frontier where it must not."""


class GeometryError(SpeiserLabError):
    """Invalid geometric input (degenerate set, non-triangulation, ...)."""


class SolverError(SpeiserLabError):
    """Numeric solver failed to converge; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
