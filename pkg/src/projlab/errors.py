"""Exception types shared across the package."""


class ProjlabError(Exception):
    """Base class for all package-specific errors."""


class InputDomainError(ProjlabError, ValueError):
    """An argument is outside the documented domain of an operation."""


class SingularityError(ProjlabError, ValueError):
    """A matrix required to be invertible is (numerically) singular.

    Carries the offending smallest singular value in ``sigma``.
    """

    def __init__(self, message, sigma):
        super().__init__(f"{message} (sigma={sigma:.3e})")
        self.sigma = sigma


class DegeneracyError(ProjlabError, ValueError):
    """A geometric configuration is degenerate (dependent vectors, coincident
    points, collapsed spans).  Carries the conditioning value in ``sigma``."""

    def __init__(self, message, sigma):
        super().__init__(f"{message} (sigma={sigma:.3e})")
        self.sigma = sigma


class PremiseViolationError(ProjlabError, ValueError):
    """A quantitative hypothesis needed for a bound failed on a concrete
    instance.  ``trial`` identifies which trial broke it, when applicable."""

    def __init__(self, message, trial=None):
        if trial is not None:
            message = f"{message} (trial {trial})"
        super().__init__(message)
        self.trial = trial


class ResourceBudgetError(ProjlabError, ValueError):
    """A requested computation exceeds the configured resource budget."""


class ConfigError(ProjlabError, ValueError):
    """An experiment configuration file is malformed; the message names the
    offending field."""
