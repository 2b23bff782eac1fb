"""
Exception hierarchy for the mixing engine.
"""

E_PARAMETER = "E_PARAMETER"
E_SERIES = "E_SERIES"
E_RANGE = "E_RANGE"
E_MISMATCH = "E_MISMATCH"
E_CUTOFF = "E_CUTOFF"
E_FIT = "E_FIT"
E_USAGE = "E_USAGE"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_VERIFY = 3


class GibbsMixingError(Exception):
    """Base error carrying a stable code next to the message."""

    error_code = "E_UNKNOWN"
    exit_status = EXIT_NUMERIC

    def __init__(self, message: str, error_code: str = None):
        if error_code is not None:
            self.error_code = error_code
        self.message = message
        super().__init__(f"{self.error_code}: {message}")


class ParameterError(GibbsMixingError, ValueError):
    error_code = E_PARAMETER
    exit_status = EXIT_USAGE


class UsageError(GibbsMixingError):
    error_code = E_USAGE
    exit_status = EXIT_USAGE


class SeriesConvergenceError(GibbsMixingError):
    error_code = E_SERIES


class NumericRangeError(GibbsMixingError):
    error_code = E_RANGE


class ConfigMismatchError(GibbsMixingError):
    error_code = E_MISMATCH


class CutoffTooSmallError(GibbsMixingError):
    error_code = E_CUTOFF


class FitError(GibbsMixingError):
    error_code = E_FIT


def exit_status_for(exc: BaseException) -> int:
    if isinstance(exc, GibbsMixingError):
        return exc.exit_status
    return EXIT_NUMERIC
