"""Exception types shared across the package."""


class QgccError(Exception):
    """Base class for all package-specific errors."""


class StructureViolation(QgccError):
    """A matrix does not have the required doubled/Hermitian block structure."""


class DimensionMismatch(QgccError):
    """Matrix dimensions are mutually inconsistent."""


class NotHermitian(QgccError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotHurwitz(QgccError):
    """A drift matrix has an eigenvalue with non-negative real part."""


class NonPositiveKappa(QgccError):
    """The cavity damping rate must be strictly positive."""


class NonPositiveR(QgccError):
    """The cost weighting matrix must be positive definite."""


class IllConditioned(QgccError):
    """A linear solve produced a residual too large to trust."""


class Unrealizable(QgccError):
    """No squeezer parameters reproduce the requested controller term."""


class NoControllerNeeded(Unrealizable):
    """The controller matrix is zero; there is nothing to realize."""


class SingularSqueezer(QgccError):
    """The squeezer feedback inverse does not exist for these parameters."""


class Unsupported(QgccError):
    """The requested configuration is outside the supported problem class."""


class ConfigError(QgccError):
    """A run configuration file is malformed or inconsistent."""
