"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Malformed distribution/model/run configuration (bad JSON, bad field values)."""


class AssumptionViolation(ValueError):
    """A standing model assumption required by the requested operation fails."""

    def __init__(self, label: str, message: str):
        self.label = label
        super().__init__(f"assumption ({label}) violated: {message}")


class EnumerationError(ValueError):
    """Exact enumeration is infeasible (unbounded support or state explosion)."""


class FingerprintMismatch(ValueError):
    """A trajectory was paired with a model it was not generated from."""


class InsufficientTailMass(ValueError):
    """Too few expected tail hits for a meaningful empirical tail estimate."""
