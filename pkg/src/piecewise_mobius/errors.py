"""Exception types raised by the library."""


class PMTError(Exception):
    """Base class for all library errors."""


class DegenerateMap(PMTError, ValueError):
    """Coefficients with (numerically) vanishing determinant."""


class IdentityMap(PMTError, ValueError):
    """Operation undefined for the identity transformation."""


class DegenerateCircline(PMTError, ValueError):
    pass


class NoRegion(PMTError):
    """A point lies in no region and is not near the boundary."""


class BadParameter(PMTError, ValueError):
    pass


class DepthOverflow(PMTError):
    """The backward-arc computation exceeded its arc cap."""


class SceneError(PMTError, ValueError):
    """Malformed or inconsistent scene configuration."""
