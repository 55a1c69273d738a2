"""Exception types shared across the package."""


class QcongError(Exception):
    """Base class for all package-specific errors."""


class PrecisionExceededError(QcongError):
    """A coefficient beyond the known window of a series was requested."""


class NonUnitLeadingError(QcongError):
    """Series inversion needs a unit leading coefficient in the active mode."""


class FractionalValuationError(QcongError):
    """An eta quotient whose leading exponent is not an integer cannot be
    compiled to a q-series."""


class NotCoprimeError(QcongError):
    """Hecke action T(k) on the index-m basis element requires gcd(k, m) = 1."""


class EigenformSanityError(QcongError):
    """A newform expansion failed multiplicativity or the coefficient
    recursion at prime powers."""


class SeedMissingError(QcongError):
    """No bundled coefficient seed for the requested level."""


class LevelUnavailableError(QcongError):
    """The requested level cannot be served (unsupported or seed missing)."""


class NoModelFoundError(QcongError):
    """The bounded model search found no integral consistent curve."""


class AmbiguousModelError(QcongError):
    """The bounded model search found several consistent curves."""

    def __init__(self, models):
        self.models = list(models)
        super().__init__(f"{len(self.models)} consistent models: {self.models}")


class ZeroPivotError(QcongError):
    """The coordinate recursion hit a vanishing pivot (normalization bug)."""


class NonIntegralError(QcongError):
    """A coefficient that must be an integer picked up a denominator."""

    def __init__(self, exponent, message=""):
        self.exponent = exponent
        super().__init__(message or f"non-integral coefficient at exponent {exponent}")


class InconsistentModelError(QcongError):
    """Curve model and weight-2 expansion disagree at some exponent."""

    def __init__(self, exponent, message=""):
        self.exponent = exponent
        super().__init__(message or f"model inconsistent at exponent {exponent}")
