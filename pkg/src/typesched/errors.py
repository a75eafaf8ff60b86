"""Exception types shared across the solver stack."""


class TypeschedError(Exception):
    """Base class for all library errors."""


class InvalidSchedule(TypeschedError):
    """A schedule references machines out of range or misses a job."""


class ParseError(TypeschedError):
    """Malformed instance or schedule document."""


class DimensionMismatch(ParseError):
    """Matrix shape disagrees with the declared k and n."""


class ConfigExplosion(TypeschedError):
    """Configuration enumeration would exceed the configured limit."""

    def __init__(self, limit: int):
        super().__init__(f"configuration count exceeds limit {limit}")
        self.limit = limit


class NodeLimitExceeded(TypeschedError):
    """Branch-and-bound node budget exhausted (epsilon too small for desk scale)."""

    def __init__(self, limit: int):
        super().__init__(f"branch-and-bound node budget {limit} exhausted")
        self.limit = limit


class LimitExceeded(TypeschedError):
    """Brute-force oracle asked to solve an instance beyond its limits."""


class Unschedulable(TypeschedError):
    """No machine can run some job within the search bounds."""


class InfeasibleDemands(TypeschedError):
    """No flow satisfies all edge demands."""


class InternalInvariantViolation(TypeschedError):
    """A guarantee the algorithm relies on failed; indicates a solver bug."""
