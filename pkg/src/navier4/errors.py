"""Exception hierarchy for the navier4 package.

Every error raised deliberately by the library derives from
:class:`Navier4Error`, so callers can catch one type at the boundary.
"""


class Navier4Error(Exception):
    """Base class for all navier4 errors."""


class DomainError(Navier4Error):
    """A point lies outside the closed box, or a domain argument is invalid."""


class TruncationError(Navier4Error):
    """Requested truncation order exceeds what the grid can represent."""


class ComplexRootsError(Navier4Error):
    """The shift polynomial has complex roots (discriminant < 0)."""


class ShiftTooLargeError(Navier4Error):
    """A Helmholtz shift reaches or exceeds the first eigenvalue."""


class NearResonanceError(Navier4Error):
    """A spectral or discrete denominator is too close to zero."""


class NotAdmissibleError(Navier4Error):
    """Parameters fail the admissibility conditions required by a solver."""


class ConstantDegenerateError(Navier4Error):
    """A kernel constant came out nonpositive or nonfinite.

    Usually signals a truncation artifact (negative kernel dip) or an
    inadmissible shift.
    """


class NonlinearityContractError(Navier4Error):
    """A nonlinearity returned a negative value on nonnegative inputs."""


class SingularJacobianError(Navier4Error):
    """Newton hit an exactly singular Jacobian."""


class ConfigError(Navier4Error):
    """Invalid configuration, mismatched objects, or unusable run options."""
