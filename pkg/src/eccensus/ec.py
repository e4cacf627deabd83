"""General Weierstrass curves over an abstract coefficient field.

One implementation covers every characteristic: invariants come from the
b-quantities (so j = c4^3 / disc needs no division by 1728), the chord and
tangent group law carries the full a1..a6 terms, and the third division
polynomial is 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8.  Coefficients may be
finite field elements or rational functions; anything with ring operators
and integer coercion works.

Group structure over a finite field (order, elementary divisors, cyclicity)
is computed through the kernels backend: an x-line scan counts points, and
the exponent is resolved by a deterministic point scan with early exit,
falling back to exact l-torsion counting for the few unresolved primes.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import arith, funcfield, kernels
from .errors import PointNotOnCurve, SingularCurve, TooLarge
from .gf import FieldElement, FiniteField

_CENSUS_FIELD_CAP = 1 << 24
_SCAN_BUDGET = 16


class WeierstrassCurve:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    __slots__ = ("a1", "a2", "a3", "a4", "a6")

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1 = a1
        self.a2 = a2
        self.a3 = a3
        self.a4 = a4
        self.a6 = a6

    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def domain_element(self, c: int):
        """The integer c inside the coefficient field."""
        return self.a1 * 0 + c

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.coefficients()
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c4(self):
        b2, b4, _, _ = self.b_invariants()
        return b2 * b2 - 24 * b4

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -(b2 * b2) * b8 - 8 * (b4 * b4 * b4) - 27 * (b6 * b6) + 9 * b2 * b4 * b6

    def j_invariant(self):
        disc = self.discriminant()
        if not disc:
            raise SingularCurve("j is undefined: discriminant is zero")
        c4 = self.c4()
        return c4 * c4 * c4 / disc

    def is_elliptic(self) -> bool:
        return bool(self.discriminant())

    def rhs(self, x):
        """x^3 + a2 x^2 + a4 x + a6."""
        return ((x + self.a2) * x + self.a4) * x + self.a6

    def __eq__(self, other):
        if not isinstance(other, WeierstrassCurve):
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash(self.coefficients())

    def __repr__(self):
        return (
            f"WeierstrassCurve(a1={self.a1!r}, a2={self.a2!r}, a3={self.a3!r}, "
            f"a4={self.a4!r}, a6={self.a6!r})"
        )


def curve_invariants(e: WeierstrassCurve):
    """(b2, b4, b6, b8, disc, j); j is None when the curve is singular."""
    b2, b4, b6, b8 = e.b_invariants()
    disc = e.discriminant()
    j = e.j_invariant() if disc else None
    return b2, b4, b6, b8, disc, j


def is_nonisotrivial(e: WeierstrassCurve) -> bool:
    """True iff the j-invariant is a nonconstant rational function."""
    j = e.j_invariant()
    if not isinstance(j, funcfield.RationalFunction):
        raise TypeError("non-isotriviality is a question about curves over F_q(t)")
    return not j.is_constant()


class CurvePoint:
    """Infinity or an affine point (x, y)."""

    __slots__ = ("x", "y", "infinite")

    def __init__(self, x=None, y=None, infinite=False):
        if not infinite and (x is None or y is None):
            raise ValueError("affine points need both coordinates")
        self.x = x
        self.y = y
        self.infinite = infinite

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls(infinite=True)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.infinite or other.infinite:
            return self.infinite and other.infinite
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash(("inf",)) if self.infinite else hash((self.x, self.y))

    def __repr__(self):
        return "O" if self.infinite else f"({self.x!r}, {self.y!r})"


INFINITY = CurvePoint.infinity()


def on_curve(e: WeierstrassCurve, pt: CurvePoint) -> bool:
    if pt.infinite:
        return True
    x, y = pt.x, pt.y
    lhs = y * y + e.a1 * x * y + e.a3 * y
    return lhs == e.rhs(x)


def _require_on_curve(e, pt):
    if not on_curve(e, pt):
        raise PointNotOnCurve(f"{pt!r} does not satisfy the curve equation")


def negate(e: WeierstrassCurve, pt: CurvePoint) -> CurvePoint:
    if pt.infinite:
        return pt
    return CurvePoint(pt.x, -pt.y - e.a1 * pt.x - e.a3)


def add(e: WeierstrassCurve, p: CurvePoint, q: CurvePoint) -> CurvePoint:
    """Chord-tangent addition with the full a1..a6 formulas."""
    _require_on_curve(e, p)
    _require_on_curve(e, q)
    if p.infinite:
        return q
    if q.infinite:
        return p
    a1, a2, a3 = e.a1, e.a2, e.a3
    if p.x == q.x:
        if q.y == -p.y - a1 * p.x - a3:
            return INFINITY
        # p == q, tangent slope
        denom = 2 * p.y + a1 * p.x + a3
        lam = (3 * p.x * p.x + 2 * a2 * p.x + e.a4 - a1 * p.y) / denom
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    nu = p.y - lam * p.x
    x3 = lam * lam + a1 * lam - a2 - p.x - q.x
    y3 = -(lam + a1) * x3 - nu - a3
    return CurvePoint(x3, y3)


def scalar_mul(e: WeierstrassCurve, k: int, pt: CurvePoint) -> CurvePoint:
    _require_on_curve(e, pt)
    if k < 0:
        return scalar_mul(e, -k, negate(e, pt))
    result = INFINITY
    base = pt
    while k:
        if k & 1:
            result = add(e, result, base)
        base = add(e, base, base)
        k >>= 1
    return result


@dataclass(frozen=True)
class ElementaryDivisors:
    """E(F_Q) = Z/d x Z/(de); the group is cyclic iff d = 1."""

    d: int
    de: int

    def __post_init__(self):
        if self.d < 1 or self.de % self.d != 0:
            raise ValueError("need d >= 1 and d | de")

    @property
    def group_order(self) -> int:
        return self.d * self.de


def _finite_field_curve(e: WeierstrassCurve) -> tuple[FiniteField, tuple[int, ...]]:
    coeffs = e.coefficients()
    if not all(isinstance(c, FieldElement) for c in coeffs):
        raise TypeError("group structure requires coefficients in a finite field")
    field = coeffs[0].field
    if any(c.field != field for c in coeffs[1:]):
        raise ValueError("coefficients live in different fields")
    return field, tuple(c.pack() for c in coeffs)


def group_order(e: WeierstrassCurve) -> int:
    """|E(F_Q)| by an exact x-line scan; asserts the Hasse bound."""
    field, packed = _finite_field_curve(e)
    if field.order > _CENSUS_FIELD_CAP:
        raise TooLarge(f"field order {field.order} exceeds 2^24")
    if not e.discriminant():
        raise SingularCurve("point counts need a smooth curve")
    n = kernels.point_count(field, packed)
    _assert_hasse(n, field.order)
    return n


def _assert_hasse(n: int, q: int):
    if (n - q - 1) ** 2 > 4 * q:
        raise AssertionError(f"Hasse bound violated: N={n}, Q={q}")


def divisor_structure(field: FiniteField, packed: tuple[int, ...], n: int) -> ElementaryDivisors:
    """Elementary divisors of a smooth packed curve with known order n.

    Scans points in deterministic order accumulating the lcm of their
    orders, stopping as soon as the order is exhausted or every prime l
    with l^2 | n and l | Q - 1 is resolved; primes the scan leaves open
    are settled exactly by counting E[l^j] points level by level.
    """
    q = field.order
    fac_n = arith.factorize(n)
    candidates = [
        ell for ell in arith.factorize(q - 1).distinct_primes() if n % (ell * ell) == 0
    ]
    if not candidates:
        return ElementaryDivisors(1, n)
    found_lcm, exhausted = kernels.order_scan(
        field, packed, n, fac_n.primes, tuple(candidates), _SCAN_BUDGET
    )
    if exhausted:
        # every point order entered the lcm: exact exponent
        return ElementaryDivisors(n // found_lcm, found_lcm)
    d = 1
    for ell in candidates:
        v_n = fac_n.valuation(ell)
        v_l = 0
        m = found_lcm
        while m % ell == 0:
            m //= ell
            v_l += 1
        if v_l == v_n:
            continue  # a point of full l-power order was seen
        amax = min(arith.factorize(q - 1).valuation(ell), v_n // 2)
        a = 0
        for j in range(1, amax + 1):
            if kernels.torsion_count(field, packed, ell**j) == ell ** (2 * j):
                a = j
            else:
                break
        d *= ell**a
    return ElementaryDivisors(d, n // d)


def elementary_divisors(e: WeierstrassCurve) -> ElementaryDivisors:
    """The pair (d, de) with E(F_Q) = Z/d x Z/(de)."""
    field, packed = _finite_field_curve(e)
    n = group_order(e)
    ed = divisor_structure(field, packed, n)
    if (field.order - 1) % ed.d != 0:
        raise AssertionError("Weil pairing constraint d | Q - 1 violated")
    return ed


def is_cyclic(e: WeierstrassCurve) -> bool:
    return elementary_divisors(e).d == 1


class XPoly:
    """A univariate polynomial with coefficients in any coefficient domain
    of the curves (field elements, rational functions)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, XPoly):
            return NotImplemented
        return (
            len(self.coeffs) == len(other.coeffs)
            and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __hash__(self):
        return hash(len(self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, XPoly):
            return XPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return XPoly([])
        zero = self.coeffs[0] * 0
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return XPoly(out)

    __rmul__ = __mul__

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return XPoly(out)

    def __sub__(self, other):
        return self + XPoly([-c for c in other.coeffs])

    def evaluate(self, x):
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return "XPoly(" + ", ".join(repr(c) for c in self.coeffs) + ")"


def division_polynomial_3(e: WeierstrassCurve) -> XPoly:
    """psi_3 in x: an affine point P with 2P != O has 3P = O iff psi_3(x(P)) = 0."""
    b2, b4, b6, b8 = e.b_invariants()
    three = e.domain_element(3)
    return XPoly([b8, 3 * b6, 3 * b4, b2, three])
