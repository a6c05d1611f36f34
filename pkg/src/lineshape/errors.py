"""Exception types shared across the package."""


class DomainError(ValueError):
    """A physical parameter is outside its allowed domain."""


class ConfigurationError(ValueError):
    """A structurally valid input describes an unusable configuration."""


class ScenarioError(ValueError):
    """A scenario file could not be parsed.

    Carries the offending line number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VerificationFailure(RuntimeError):
    """The verification suite reported a failing (non-expected-fail) check."""
