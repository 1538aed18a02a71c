"""Exception hierarchy shared by every module."""


class QGibbsError(Exception):
    """Base class for all errors raised by qgibbs."""


class ContainmentError(QGibbsError, ValueError):
    """A support or region is not contained where it must be."""


class ResourceError(QGibbsError, MemoryError):
    """A dense object would exceed the configured dimension cap."""


class HermiticityError(QGibbsError, ValueError):
    """An operation requiring a Hermitian operator received a non-Hermitian one."""


class DomainError(QGibbsError, ValueError):
    """A matrix function was requested outside its domain (e.g. log of a negative operator)."""


class GeometryError(QGibbsError, ValueError):
    """Ambient region too small for the interaction collar, or mismatched lattice dimension."""


class ValidationError(QGibbsError, ValueError):
    """Input violates a documented invariant."""


class ConfigError(QGibbsError, ValueError):
    """Malformed experiment configuration."""

    def __init__(self, message, path=()):
        self.path = tuple(path)
        where = ".".join(str(p) for p in self.path) or "<root>"
        super().__init__(f"{where}: {message}")
