class PetzLossError(Exception):
    """Base class for all errors raised by petzloss."""


class DomainError(PetzLossError, ValueError):
    pass


class FormatError(PetzLossError, ValueError):
    pass


class UnphysicalStateError(PetzLossError, ValueError):
    """Covariance matrix violates the uncertainty bound det V >= 1."""


class InternalConsistencyError(PetzLossError, RuntimeError):
    pass


class PureOutputError(PetzLossError, ValueError):
    """N(sigma) is pure, so the Petz map needs a pseudo-inverse (unsupported)."""


class NotScalarError(PetzLossError, ValueError):
    """Covariances of prior and environment are not proportional."""


class NoBeamSplitterRealizationError(PetzLossError, ValueError):
    pass


class CutoffTooSmallError(PetzLossError, ValueError):
    """Fock truncation lost more probability than the oracle tolerates."""

    def __init__(self, deficit: float, cutoff: int):
        super().__init__(f"trace deficit {deficit:.3g} exceeds tolerance at cutoff {cutoff}")
        self.deficit = deficit
        self.cutoff = cutoff
