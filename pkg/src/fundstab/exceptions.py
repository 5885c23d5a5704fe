"""Exception hierarchy shared by the solver modules."""


class DomainError(ValueError):
    """An input lies outside the domain where the model is defined."""


class UnsupportedRegimeError(DomainError):
    """The requested quantity is only defined for a different liquidity regime."""


class InfeasibleProblemError(DomainError):
    """No admissible liability structure exists on the requested search space."""


class ConfigError(DomainError):
    """A sweep or CLI configuration is malformed.

    ``field`` names the offending entry so callers can report it.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
