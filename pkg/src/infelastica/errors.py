"""Exception types shared across the package."""


class ElasticaError(Exception):
    """Base class for all package-specific errors."""


class OutOfChartDomain(ElasticaError):
    """A point violates the coordinate chart's domain guard."""


class BeyondInjectivityRadius(ElasticaError):
    """log_map requested between points with no unique minimal geodesic."""


class CurveTooCoarse(ElasticaError):
    """Discrete curve has fewer than the minimum number of segments."""


class DegenerateCurve(ElasticaError):
    """Two consecutive curve nodes coincide."""


class EmptyWindow(ElasticaError):
    """Nearest-point search received an empty segment window."""


class MissingReference(ElasticaError):
    """Penalty weight is positive but no reference curve was supplied."""


class NonFiniteGradient(ElasticaError):
    """Objective gradient contains NaN or Inf entries."""


class SeedFailure(ElasticaError):
    """Initial-curve construction could not match the target length."""


class GeodesicDegenerate(ElasticaError):
    """Operation undefined on (near-)geodesic data, e.g. multiplier fit."""


class NoChainFound(ElasticaError):
    """Arc-chain search found no feasible chain for the boundary data."""


class FieldCurveMismatch(ElasticaError):
    """A vector field does not match the curve it is evaluated along."""
