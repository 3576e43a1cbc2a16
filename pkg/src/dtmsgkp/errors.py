"""Exception types raised across the package."""


class DtmsError(Exception):
    """Base class for all package errors."""


class DomainError(DtmsError, ValueError):
    """A parameter lies outside the domain of the operation (e.g. gain below 1)."""


class DimensionError(DtmsError, ValueError):
    """A matrix or vector has an incompatible shape."""


class ModeIndexError(DtmsError, IndexError):
    """Invalid mode indices, e.g. a beamsplitter acting twice on the same mode."""


class NotGKPLatticeError(DtmsError, ValueError):
    """The symplectic Gram matrix of a generator is not integral."""


class DegenerateLatticeError(DtmsError, ValueError):
    """A generator or Gram matrix is singular."""


class UnsupportedError(DtmsError, ValueError):
    """Requested combination of family / mode is not supported."""


class UnsupportedDecoderError(UnsupportedError):
    """The linear decoder is only defined for CSS (phi = 0) codes."""


class VerificationError(DtmsError):
    """A numerical consistency relation failed.

    Attributes
    ----------
    deviation : float
        Largest absolute deviation observed.
    """

    def __init__(self, message, deviation=float("nan")):
        super().__init__(message)
        self.deviation = deviation
