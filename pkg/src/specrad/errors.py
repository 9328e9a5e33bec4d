"""Exception taxonomy shared across the package.

Every error raised on a contract violation is a subclass of SpecradError so
callers (and the CLI, which maps ConfigurationError to exit code 2) can
discriminate configuration mistakes from genuine numerical failures.
"""


class SpecradError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimensionError(SpecradError, ValueError):
    """A matrix dimension is zero, negative, or inconsistent."""


class InvalidParameterError(SpecradError, ValueError):
    """A numeric argument violates an operation's precondition."""


class ConfigurationError(SpecradError, ValueError):
    """An experiment configuration failed validation before any work ran."""


class InvalidInputError(SpecradError, ValueError):
    """Structurally incompatible inputs (e.g. mismatched dimensions)."""


class MissingDataError(SpecradError, ValueError):
    """An optional field (e.g. singular vectors) is required but absent."""


class OutOfRangeError(SpecradError, ValueError):
    """A requested quantile or index lies outside the attainable range."""


class DomainError(SpecradError, ValueError):
    """Argument outside a function's mathematical domain."""


class NumericalFailureError(SpecradError, RuntimeError):
    """A numerical routine (SVD, eigensolve, integrator) failed.

    Carries enough context to reproduce the failure.
    """

    def __init__(self, message, *, seed=None, z=None, **extra):
        self.seed = seed
        self.z = z
        self.extra = extra
        detail = []
        if seed is not None:
            detail.append(f"seed={seed}")
        if z is not None:
            detail.append(f"z={z}")
        detail.extend(f"{k}={v}" for k, v in extra.items())
        if detail:
            message = f"{message} [{', '.join(detail)}]"
        super().__init__(message)


class SolverFailureError(NumericalFailureError):
    """Root continuation lost the physical branch; diagnostics attached."""


class NearSingularWarning(UserWarning):
    """A matrix inverse/power is requested close to singularity."""
