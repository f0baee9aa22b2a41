"""Exception types shared across the elicitation toolkit."""

from __future__ import annotations


class MetricElicitError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(MetricElicitError):
    """Statistic dimension does not match the metric family."""


class NonPositiveDenominator(MetricElicitError):
    """Linear-fractional denominator is not positive at the queried point."""


class DegenerateMetric(MetricElicitError):
    """Metric weights collapse (e.g. m11 + m00 = 0) so the threshold is undefined."""


class SessionClosed(MetricElicitError):
    """External oracle session no longer accepts queries."""


class QuadrantViolation(MetricElicitError):
    """Sphere-surface angles fall outside the requested quadrant."""


class NoSignal(MetricElicitError):
    """Distribution carries no usable classification signal (degenerate feasible set)."""


class SingularSystem(MetricElicitError):
    """Linear-fractional reconstruction system is singular."""


class ReferenceCollapse(MetricElicitError):
    """Reference coefficient in a ratio search is too small to divide by."""


class SingularXi(MetricElicitError):
    """Group-membership matrix for the pairwise fairness system is singular."""


class SingularDelta(MetricElicitError):
    """Denominator of the per-partition rescaling factor is below tolerance."""


class RegularityViolation(MetricElicitError):
    """A required non-degeneracy condition on elicited coefficients fails."""


class ReferenceZero(MetricElicitError):
    """All gradient coordinates at the probe centers are below threshold."""


class IllConditioned(MetricElicitError):
    """Probing system is numerically singular; increase epsilon or reduce the basis."""


class UnknownTarget(MetricElicitError):
    """Requested reproduction target does not exist."""


class BadConfig(MetricElicitError):
    """Invalid session or experiment configuration."""


class SessionNotFound(MetricElicitError):
    """No session with the given id."""


class PhaseViolation(MetricElicitError):
    """Operation not allowed in the session's current phase."""


class DuplicateAnswer(MetricElicitError):
    """Answer token does not match the expected next query index."""


class NotReady(MetricElicitError):
    """Result requested before the session completed."""
