"""Exception hierarchy shared by all spectra_kit modules."""


class SpectraKitError(Exception):
    """Base class for every error raised by this package."""


class InputError(SpectraKitError, ValueError):
    """Malformed or out-of-contract input."""


class NotConvex(InputError):
    pass


class Degenerate(InputError):
    pass


class NotSymmetric(InputError):
    pass


class FacetNotSymmetric(InputError):
    pass


class IsPrism(InputError):
    pass


class BadIndex(InputError, IndexError):
    pass


class DimensionMismatch(InputError):
    pass


class TooFew(InputError):
    pass


class EmptySet(InputError):
    pass


class NotNormalized(InputError):
    pass


class ContinuousKind(InputError):
    """Enumeration requested for an H-set made of whole lines."""


class InsufficientWindow(InputError):
    """A finite point window is too small for the requested computation."""


class NotAWindow(InputError):
    pass


class Unsupported(InputError):
    pass
