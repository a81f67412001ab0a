"""Exception taxonomy for the whole package.

Every failure mode callers are expected to catch derives from
:class:`MachinaError`; generic programming mistakes still surface as the
usual builtins (TypeError, ValueError).
"""


class MachinaError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------- vectors

class NegativeEntryError(MachinaError):
    """A probability entry is negative beyond the clipping tolerance."""


class NotNormalizedError(MachinaError):
    """Entries do not sum to one within tolerance."""


class PaddingError(MachinaError):
    """Requested padded length is shorter than the vector."""


class IllegalTransferError(MachinaError):
    """Transfer preconditions violated (no disparity, or amount too large)."""


class NotComparableError(MachinaError):
    """A transfer chain was requested between incomparable vectors."""


# ---------------------------------------------------------------- model files

class ModelFormatError(MachinaError):
    """Malformed model file; carries the offending line number."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class UnknownStateError(MachinaError):
    """Reference to a state that was never declared."""


class UnknownSymbolError(MachinaError):
    """Reference to a symbol outside the alphabet."""


class DuplicateTransitionError(MachinaError):
    """The same (state, symbol) transition appears more than once."""


# ---------------------------------------------------------------- classical models

class NotStochasticError(MachinaError):
    """Some state's outgoing probabilities do not sum to one."""


class NotUnifilarError(MachinaError):
    """A (state, symbol) pair leads to more than one successor."""


class NotIrreducibleError(MachinaError):
    """The positive-transition graph is not strongly connected."""


class NoConvergenceError(MachinaError):
    """An iterative solver hit its iteration cap."""


class UnreachableCopyError(MachinaError):
    """A state split leaves some copy with no incoming transition."""


# ---------------------------------------------------------------- quantum models

class InvalidModelError(MachinaError):
    """A structural invariant of a quantum model fails (shape, norm)."""


class CompletenessViolationError(MachinaError):
    """The Kraus operators do not resolve the identity within tolerance."""


class NotPSDError(MachinaError):
    """Matrix expected to be positive semidefinite is not."""


class NotHermitianError(MachinaError):
    """Matrix expected to be Hermitian is not."""


class DimensionMismatchError(MachinaError):
    """Vector or matrix dimensions do not line up."""


class AmbiguousSuccessorError(MachinaError):
    """No unique post-emission state; the model is not unifilar."""


# ---------------------------------------------------------------- qubit family

class UnphysicalThetaError(MachinaError):
    """Phase angle inside the band where the overlap parameter exceeds one."""


class SingularThetaError(MachinaError):
    """Phase angle at the edge of the physical band where duals blow up."""


class UniquenessViolatedError(MachinaError):
    """The residual sweep found an unexpected extra zero."""
