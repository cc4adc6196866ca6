"""Error types for torus-ech.

Provides the exception hierarchy raised by the library and mapped to exit codes by the CLI:
  - EchError: base class for every library error
  - RejectedInputError: invalid parameters or malformed values
  - RangeError: lookup beyond a generated sequence
  - TrivializationDomainError: trivialization requested outside its domain
  - UnderivableError: value not derivable from the tabulated data and the ledger
  - LedgerInconsistencyError: two ledger paths disagree
  - VerificationError: internal consistency failure of a computed object
"""


class EchError(Exception):
    """Base class for all torus-ech errors."""


class RejectedInputError(EchError, ValueError):
    """Invalid input parameters (even q, nonpositive step, degenerate ratio, ...)."""


class RangeError(EchError, IndexError):
    """Index beyond the generated length of a sequence."""


class TrivializationDomainError(EchError, ValueError):
    """A trivialization was requested over an orbit cover where it is not defined."""


class UnderivableError(EchError):
    """A (class, trivialization) value cannot be derived from the ledger."""


class LedgerInconsistencyError(EchError):
    """Two composition paths through the offset ledger give different values."""


class VerificationError(EchError):
    """A computed object failed an internal consistency check.

    Attributes:
        offending: the gradings (or other keys) that triggered the failure
    """

    def __init__(self, message: str, offending: list | None = None):
        super().__init__(message)
        self.offending = offending or []
