"""Ramification calculus: the rho invariant, tower composition, Eisenstein
different valuations, and the effective Chebotarev error bound.

rho is computed from (ramification index, different valuation) pairs in
exact integer arithmetic; the bound evaluator keeps q^(n/2) exact for even
n and rounds it up to the integer square-root ceiling for odd n, so the
reported bound always dominates the real-valued one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import AmbiguousValuation


@dataclass(frozen=True)
class RamificationDatum:
    """A totally ramified local extension: index e, different valuation dD,
    residue characteristic p.  Tame means p does not divide e, and happens
    exactly when dD = e - 1."""

    e: int
    dD: int
    p: int

    def __post_init__(self):
        if self.e < 1 or self.dD < 0:
            raise ValueError("need e >= 1 and dD >= 0")
        if self.dD < self.e - 1:
            raise ValueError("different valuation below e - 1")
        tame = self.e % self.p != 0
        if tame and self.dD != self.e - 1:
            raise ValueError("tame extension must have dD = e - 1")
        if not tame and self.dD == self.e - 1:
            raise ValueError("wild extension cannot have dD = e - 1")

    @property
    def is_tame(self) -> bool:
        return self.e % self.p != 0


def rho_of(datum: RamificationDatum) -> int:
    """ceil((dD + 1)/e) - 1; zero exactly in the tame case."""
    return -((datum.dD + 1) // -datum.e) - 1


def tower_compose(
    lower: RamificationDatum, upper: RamificationDatum
) -> RamificationDatum:
    """The datum of M/K from L/K (lower) and M/L (upper): indices multiply
    and the differents compose by dD = dD_upper + e_upper * dD_lower."""
    if lower.p != upper.p:
        raise ValueError("residue characteristics differ")
    return RamificationDatum(
        e=upper.e * lower.e,
        dD=upper.dD + upper.e * lower.dD,
        p=lower.p,
    )


@dataclass(frozen=True)
class LemmaCheck:
    rho_lower: int
    rho_upper_step: int
    rho_composed: int
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def lemma_bounds_check(
    lower: RamificationDatum, upper: RamificationDatum
) -> LemmaCheck:
    """rho(L/K) <= rho(M/K) <= rho(L/K) + ceil(rho(M/L)/e(L/K))."""
    rl = rho_of(lower)
    ru = rho_of(upper)
    rc = rho_of(tower_compose(lower, upper))
    bound = rl + -(ru // -lower.e)
    return LemmaCheck(
        rho_lower=rl,
        rho_upper_step=ru,
        rho_composed=rc,
        lower_ok=rl <= rc,
        upper_ok=rc <= bound,
    )


@dataclass(frozen=True)
class ValuedEisenstein:
    """A defining polynomial given by coefficient valuations.

    terms lists (i, v_i): the valuation of the x^i coefficient in base-field
    units; absent indices are zero coefficients.  Classical Eisenstein data
    has v_0 = 1; v_0 > 1 is tolerated so stated different values with an
    implied uniformizer power can be evaluated as fixtures.
    """

    e: int
    terms: tuple[tuple[int, int], ...]
    p: int

    def __post_init__(self):
        tmap = dict(self.terms)
        if self.e < 1:
            raise ValueError("degree must be >= 1")
        if tmap.get(self.e) != 0:
            raise ValueError("leading coefficient must be a unit (valuation 0)")
        if 0 not in tmap or tmap[0] < 1:
            raise ValueError("constant term must have valuation >= 1")
        for i, v in self.terms:
            if not 0 <= i <= self.e:
                raise ValueError(f"index {i} out of range")
            if 0 < i < self.e and v < 1:
                raise ValueError("inner coefficients must have valuation >= 1")


def eisenstein_different(f: ValuedEisenstein) -> int:
    """Valuation (in the extension field) of f'(alpha) for a root alpha.

    Each term i * a_i * alpha^(i-1) of the derivative has valuation
    e * v(a_i) + (i - 1); terms with p | i vanish outright (the integer i
    is zero in characteristic p).  The minimum must be attained by a
    unique term: a tie only bounds the ultrametric value from below, so
    ambiguous inputs raise instead of guessing.
    """
    values = []
    for i, v in f.terms:
        if i == 0 or i % f.p == 0:
            continue
        values.append(f.e * v + i - 1)
    if not values:
        raise ValueError("derivative vanishes: polynomial is inseparable")
    lo = min(values)
    if values.count(lo) > 1:
        raise AmbiguousValuation(
            f"{values.count(lo)} derivative terms share the minimum {lo}"
        )
    return lo


@dataclass(frozen=True)
class ChebotarevParams:
    """Inputs of the error bound: genus, the degree sum over ramified/bad
    places, the rho invariant, the constant field size q, the constant-field
    degree c of the extension, and the total degree."""

    genus: int
    s_deg: int
    rho: int
    q: int
    c: int = 1
    degree: int = 1

    def __post_init__(self):
        if min(self.genus, self.s_deg, self.rho) < 0 or self.c < 1 or self.q < 2:
            raise ValueError("invalid Chebotarev parameters")


SPLIT_IMPOSSIBLE = "split-impossible"


def _qpow_half_ceil(q: int, n: int) -> int:
    """Exact q^(n/2) for even n, else ceil(sqrt(q^n))."""
    if n % 2 == 0:
        return q ** (n // 2)
    qn = q**n
    r = math.isqrt(qn)
    return r if r * r == qn else r + 1


def chebotarev_error_bound(params: ChebotarevParams, n: int):
    """2((3g + (rho+1)|S|) q^(n/2)/n + |S|/(2n)) + |S|, as an exact rational
    upper rounding; the marker SPLIT_IMPOSSIBLE when c does not divide n
    (no degree-n place splits completely then)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % params.c != 0:
        return SPLIT_IMPOSSIBLE
    half = _qpow_half_ceil(params.q, n)
    lead = 3 * params.genus + (params.rho + 1) * params.s_deg
    return (
        2 * (Fraction(lead * half, n) + Fraction(params.s_deg, 2 * n))
        + params.s_deg
    )


def relaxed_display_bound(q: int, n: int) -> Fraction:
    """8 (q^(n/2) + 1)/n + 2 with the same exact upper rounding of q^(n/2);
    the comparison target for genus-0, |S| = 2, rho = 1 parameters."""
    half = _qpow_half_ceil(q, n)
    return Fraction(8 * (half + 1), n) + 2
