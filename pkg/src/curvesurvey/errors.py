"""Exception hierarchy shared by all modules.

CLI exit codes: ValidationError (and subclasses) -> 2, NumericalError -> 3,
OracleFailure -> 4.
"""


class CurveSurveyError(Exception):
    """Base class for all library errors."""


class ValidationError(CurveSurveyError):
    """Bad input: shapes, ranges, preconditions, config values."""


class ConfigurationError(ValidationError):
    """Invalid configuration (config file or synthetic-model descriptors)."""


class EnumerationCapError(ValidationError):
    """Exhaustive sample enumeration would exceed the configured cap."""

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(
            f"enumeration needs {required} samples, above the cap of {cap}; "
            f"raise the cap to at least {required} to proceed"
        )


class NumericalError(CurveSurveyError):
    """Numerical degeneracy: singular matrices, indefinite factorizations."""


class DegenerateVarianceError(NumericalError):
    """Estimated variance vanishes somewhere a positive variance is required."""


class OracleFailure(CurveSurveyError):
    """An exhaustive-enumeration identity check failed beyond tolerance."""
