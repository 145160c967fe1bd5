class AnalysisError(ValueError):
    """Base class of every error raised by the geometry toolkit."""


class NonFiniteError(AnalysisError):
    pass


class CausalClassError(AnalysisError):
    """A vector has the wrong causal character (or time orientation)."""


class DomainError(AnalysisError):
    """A parameter point or a domain description is out of range."""


class CausalDegeneracyError(AnalysisError):
    """The tangent plane is not spacelike (EG - F^2 <= 0)."""


class ImmersionDegeneracyError(AnalysisError):
    """X_u and X_v are linearly dependent."""


class NonIsothermalError(AnalysisError):
    pass


class SamplingDensityError(AnalysisError):
    """Consecutive argument samples jump by pi/2 or more, or the grid is too coarse."""


class SingularityError(AnalysisError):
    """A loop or arc passes too close to a singularity of the line field."""


class UmbilicPointError(AnalysisError):
    pass


class EverywhereUmbilicError(UmbilicPointError):
    pass


class DegenerateCornerError(AnalysisError):
    pass


class LineOfCurvatureError(AnalysisError):
    """A boundary edge is not a line of curvature where one is required."""


class VertexError(AnalysisError):
    """A smooth-boundary operation was requested at a vertex."""


class OffSurfaceError(AnalysisError):
    pass


class FrameInconsistencyError(AnalysisError):
    pass


class LightlikeSupportError(AnalysisError):
    pass


class UnknownSurfaceError(AnalysisError):
    pass


class SpecFormatError(AnalysisError):
    pass


class ExportError(AnalysisError):
    pass
