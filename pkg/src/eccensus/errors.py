"""Exception types shared across the package.

Every computational error raised by the library derives from
:class:`EccensusError`, so callers (in particular the CLI) can separate
usage mistakes from arithmetic failures.
"""


class EccensusError(Exception):
    """Base class for all library errors."""


class NotPrime(EccensusError):
    """A prime number was required."""


class TooLarge(EccensusError):
    """Input exceeds the supported desk-scale bounds."""


class NotCoprime(EccensusError):
    """Arguments were required to be coprime."""


class NotSubfield(EccensusError):
    """Embedding requested between fields without a subfield relation."""


class PoleAtPlace(EccensusError):
    """A rational function was specialized at one of its poles."""


class SingularCurve(EccensusError):
    """The Weierstrass equation has vanishing discriminant."""


class PointNotOnCurve(EccensusError):
    """A point handed to the group law does not satisfy the curve equation."""


class NotDetOne(EccensusError):
    """A matrix mod m with determinant != 1 where SL2 was required."""


class ClosureTooLarge(EccensusError):
    """Subgroup closure exceeded the element cap."""


class TooFewPrimeFactors(EccensusError):
    """q - 1 lacks the prime factors needed for the union construction."""


class MissingDegree(EccensusError):
    """A user-supplied degree table has no entry for the requested modulus."""


class NotCoprimeToP(EccensusError):
    """Torsion modulus shares a factor with the field characteristic."""


class AmbiguousValuation(EccensusError):
    """Two terms share the minimal valuation; the ultrametric bound is not exact."""


class NotASubgroup(EccensusError):
    """An element set that is not closed under the group operations."""
