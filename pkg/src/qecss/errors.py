"""Error types raised across the package.

Everything derives from :class:`QecssError` (a ``ValueError``) so callers can
catch broadly; the CLI maps dimension errors and spec errors to distinct exit
codes.
"""


class QecssError(ValueError):
    """Base class for all errors raised by this package."""


class NonSquare(QecssError):
    """A square matrix was required."""


class NotHermitian(QecssError):
    """Relative asymmetry of a matrix exceeded the tolerance."""


class NotPSD(QecssError):
    """A positive semidefinite matrix was required."""


class NegativeEigenvalue(QecssError):
    """An eigenvalue was negative beyond the clamping tolerance."""


class ZeroMatrix(QecssError):
    """The zero matrix has no inverse square root / Kraus form."""


class ShapeMismatch(QecssError):
    """Kraus operators within one channel disagree in shape."""


class DimMismatch(QecssError):
    """Input/output dimensions of two objects do not line up."""


class OutOfRange(QecssError):
    """A scalar parameter lies outside its admissible range."""


class ZeroMap(QecssError):
    """The iteration produced the zero map (objective annihilates the channel)."""
