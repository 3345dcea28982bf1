"""
Exceptions, warnings and exit codes shared by the simulator
"""

from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit status of the command-line front end"""
    OK = 0
    INVALID_SCENARIO = 2
    VERIFICATION_FAILED = 3
    TRUNCATION_FAILED = 4


class RamanscopeError(Exception):
    """Base class for every error raised by the simulator"""


class InvalidToleranceError(RamanscopeError, ValueError):
    """Truncation tolerance outside the open interval (0, 1)"""


class InvalidParameterError(RamanscopeError, ValueError):
    """Model parameters violate their invariants (non-positive coupling, detuning...)"""


class InvalidArgumentError(RamanscopeError, ValueError):
    """An operation was called with arguments outside its domain"""


class InvalidStateError(RamanscopeError, ValueError):
    """A density operator or state vector is not Hermitian, normalized or positive"""


class DegenerateInputError(RamanscopeError, ValueError):
    """The requested quantity is undefined for this input (e.g. N = 0 in the atom-mode 1 state)"""


class InternalConsistencyError(RamanscopeError, ArithmeticError):
    """A mathematically impossible value showed up; points at an implementation bug"""


class ScenarioError(RamanscopeError, ValueError):
    """A scenario violates its invariants"""


class VerificationError(RamanscopeError):
    """Analytic and oracle pipelines disagree beyond tolerance"""


class TruncationError(RamanscopeError):
    """Too much probability on the boundary layer of a truncated Fock space.

    Attributes:
        cutoff_name: "n1_max" or "n2_max"
        cutoff: the offending cutoff value
        leakage: probability found on the boundary layer
        suggested: a cutoff that keeps the boundary layer empty, when known
    """

    def __init__(self, cutoff_name: str, cutoff: int, leakage: float, suggested: int | None = None):
        self.cutoff_name = cutoff_name
        self.cutoff = cutoff
        self.leakage = leakage
        self.suggested = suggested
        message = (f"truncation too small: {cutoff_name}={cutoff} leaves probability "
                   f"{leakage:.3e} on its boundary layer")
        if suggested is not None:
            message += f" (use {cutoff_name} >= {suggested})"
        super().__init__(message)


class DispersiveLimitWarning(UserWarning):
    """Couplings are not small against the detuning; the effective Hamiltonian is questionable"""
