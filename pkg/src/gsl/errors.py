"""Exception hierarchy for the gsl package."""


class GslError(Exception):
    """Base class for all errors raised by this package."""


class IsolatedVertexError(GslError):
    """A vertex with zero degree where positive degree is required."""


class ParseError(GslError):
    """Malformed edge-list or signal file content."""


class SelfLoopError(ParseError):
    """An edge-list line connects a vertex to itself."""


class EmptyFileError(ParseError):
    """An edge-list file contains no edges."""


class DimensionMismatchError(GslError):
    """Vector/matrix dimensions incompatible with the graph size."""


class IndexOutOfRangeError(GslError):
    """A vertex or frequency index outside [0, n)."""


class ConvergenceFailureError(GslError):
    """An iterative numerical routine hit its iteration cap."""


class DegenerateSigmaError(GslError):
    """Closed-form concentration formulas requested at sigma_max ~ 1."""


class SamplingConditionViolatedError(GslError):
    """Recovery requested although the sampling condition fails."""


class FrameNotInvertibleError(GslError):
    """Frame operator is singular on the band subspace."""


class MissingCoordinatesError(GslError):
    """Geometric operation on a graph without vertex coordinates."""


class SolverFailureError(GslError):
    """Optimizer terminated without an optimality certificate."""


class TooLargeError(GslError):
    """Exhaustive search requested beyond the combinatorial guard."""


class ConfigError(GslError):
    """Invalid or incomplete experiment configuration."""
