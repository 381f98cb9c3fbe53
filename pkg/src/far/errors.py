"""Exception hierarchy shared by all far modules."""


class FarError(Exception):
    """Base class for errors raised by this package."""


class ShapeError(FarError):
    """Tensor extents are invalid or incompatible for an operation."""


class FormatError(FarError):
    """A serialized artifact (FTF file, scene file) is malformed."""


class SceneSpecError(FarError):
    """A synthetic scene specification is inconsistent or out of bounds."""


class ResourceLimitError(FarError):
    """An operation would exceed a documented size guard."""


class UnsupportedModeError(FarError):
    """The requested mode is valid elsewhere but not for this operation."""


class NumericalError(FarError):
    """A numerical invariant (finiteness, imaginary residue) was violated."""
