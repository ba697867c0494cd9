"""Exception types shared across the package."""


class TwistFiltError(Exception):
    """Base class for all package-specific errors."""


class CutoffExceededError(TwistFiltError):
    """A computation asked for a vector beyond the backend's weight cutoff."""


class SectorMismatchError(TwistFiltError):
    """A mode index lies in the wrong coset for the acting sector."""


class UnsupportedPeriodError(TwistFiltError):
    """A literal automorphism eigenvalue was requested for period > 2."""


class TableValidationError(TwistFiltError):
    """A structure-constant table violates a vertex algebra identity."""


class InsufficientCutoffError(TwistFiltError):
    """The requested computation needs a larger weight cutoff to be exact."""


class NonHomogeneousError(TwistFiltError):
    """A homogeneous vector was required but a mixed-weight one was supplied."""


class ContainmentError(TwistFiltError):
    """An expected subspace containment fails; carries a witness vector."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
