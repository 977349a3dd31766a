"""Exception hierarchy for the package.

The CLI maps each exception class to a process exit code via `exit_code`:
1 for domain errors, 2 for verification failures, 3 for resource and
integrity problems.
"""


class ConstelError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class DomainError(ConstelError, ValueError):
    """An argument is outside the documented domain of an operation."""

    exit_code = 1


class LookaheadError(ConstelError):
    """A prime window is too short to decide membership near its upper end."""

    exit_code = 1


class VerificationError(ConstelError):
    """An empirical deviation exceeded its acceptance threshold."""

    exit_code = 2


class ResourceError(ConstelError):
    """A request would exceed the configured memory budget."""

    exit_code = 3


class IntegrityError(ConstelError):
    """A checkpoint file is corrupt or inconsistent with the requested job."""

    exit_code = 3
