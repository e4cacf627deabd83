"""Polynomials and rational functions over F_q in the variable t, and the
places of the rational function field K = F_q(t).

Finite places are monic irreducible polynomials; one extra place sits at
infinity with degree 1.  Specializing a rational function at a place lands
in a chosen finite field containing the residue field, with the root of the
place polynomial picked canonically (least in packed order) so that every
census is reproducible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

from . import arith, gf
from .errors import PoleAtPlace, TooLarge

_NEG_INF = float("-inf")


class Poly:
    """A polynomial over a FiniteField; trailing zeros trimmed.

    The zero polynomial has degree -inf.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: gf.FiniteField, coeffs=()):
        cs = [field.element(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else _NEG_INF

    def __bool__(self):
        return bool(self.coeffs)

    def leading(self) -> gf.FieldElement:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        inv = self.coeffs[-1].inverse()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, gf.FieldElement)):
            return self == Poly(self.field, [other])
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, gf.FieldElement)):
            return Poly(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return Poly(self.field)
        out = [self.field.zero()] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Poly(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        num = list(self.coeffs)
        den = other.coeffs
        dd = len(den) - 1
        if len(num) - 1 < dd:
            return Poly(self.field), self
        inv = den[-1].inverse()
        q = [self.field.zero()] * (len(num) - dd)
        while num and len(num) - 1 >= dd:
            c = num[-1] * inv
            shift = len(num) - 1 - dd
            q[shift] = c
            for i, d in enumerate(den):
                num[shift + i] = num[shift + i] - c * d
            while num and not num[-1]:
                num.pop()
        return Poly(self.field, q), Poly(self.field, num)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic() if a else a

    def evaluate(self, x: gf.FieldElement) -> gf.FieldElement:
        """Horner evaluation; coefficients are embedded when x lives in an
        extension of the coefficient field."""
        target = x.field
        if target == self.field:
            cs = self.coeffs
        else:
            cs = [gf.embed(c, target) for c in self.coeffs]
        acc = target.zero()
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(
            self.field, [c * i for i, c in enumerate(self.coeffs)][1:] or []
        )

    def is_irreducible(self) -> bool:
        """Frobenius-iterate irreducibility test over the coefficient field."""
        d = self.degree
        if d is _NEG_INF or d < 1:
            return False
        if d == 1:
            return True
        q = self.field.order
        x = Poly(self.field, [0, 1])
        u = x
        iterates = {}
        for j in range(1, d + 1):
            u = _powmod(u, q, self)
            iterates[j] = u
        if iterates[d] % self != x % self:
            return False
        for ell in arith.factorize(d).distinct_primes():
            g = self.gcd(iterates[d // ell] - x)
            if g.degree != 0:
                return False
        return True

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(repr(c))
            else:
                tpow = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    parts.append(tpow)
                else:
                    parts.append(f"{c!r}*{tpow}")
        return " + ".join(parts)


def _powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly(base.field, [1])
    b = base % mod
    while e:
        if e & 1:
            result = (result * b) % mod
        b = (b * b) % mod
        e >>= 1
    return result


class RationalFunction:
    """num/den over F_q[t], stored with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly(num.field, [1])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = num.gcd(den)
            if g.degree > 0:
                num = num // g
                den = den // g
            lead = den.leading()
            if not lead == 1:
                inv = lead.inverse()
                num = num * inv
                den = den * inv
        else:
            den = Poly(num.field, [1])
        self.num = num
        self.den = den

    @property
    def field(self) -> gf.FiniteField:
        return self.num.field

    @classmethod
    def constant(cls, field: gf.FiniteField, c) -> "RationalFunction":
        return cls(Poly(field, [c]))

    @classmethod
    def variable(cls, field: gf.FiniteField) -> "RationalFunction":
        return cls(Poly(field, [0, 1]))

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        """True iff the function lies in the constant field F_q."""
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> gf.FieldElement:
        if not self.is_constant():
            raise ValueError("not a constant")
        if not self.num:
            return self.field.zero()
        return self.num.coeffs[0] / self.den.coeffs[0]

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        if isinstance(other, (int, gf.FieldElement)):
            return RationalFunction(Poly(self.field, [other]))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            return RationalFunction(self.den, self.num) ** (-e)
        return RationalFunction(self.num**e, self.den**e)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


INFINITY_PLACE = object()


@dataclass(frozen=True)
class Place:
    """A place of F_q(t): a monic irreducible polynomial, or infinity."""

    pi: Poly | None  # None encodes the place at infinity

    def __post_init__(self):
        if self.pi is not None:
            if not self.pi.is_monic() or not self.pi.is_irreducible():
                raise ValueError("finite places are monic irreducibles")

    @property
    def is_infinite(self) -> bool:
        return self.pi is None

    @property
    def degree(self) -> int:
        return 1 if self.pi is None else self.pi.degree

    def __repr__(self):
        return "Place(oo)" if self.pi is None else f"Place({self.pi!r})"


def infinity_place() -> Place:
    return Place(None)


def _poly_key(poly: Poly) -> tuple[int, ...]:
    return tuple(c.pack() for c in poly.coeffs)


def monic_irreducibles(field: gf.FiniteField, d: int) -> list[Poly]:
    """All monic irreducible degree-d polynomials over F_q, sorted by the
    packed coefficient tuple (constant term least significant)."""
    q = field.order
    if q**d > 1 << 24:
        raise TooLarge(f"q^d = {q}^{d} exceeds 2^24")
    if d < 1:
        raise ValueError("degree must be >= 1")
    if field.k == 1 and d > 1:
        polys = _prime_base_irreducibles(field, d)
    else:
        polys = _sieve_irreducibles(field, d)
    polys.sort(key=_poly_key)
    assert len(polys) == arith.monic_irreducible_count(q, d)
    return polys


def _prime_base_irreducibles(field: gf.FiniteField, d: int) -> list[Poly]:
    # Frobenius orbits of exact-degree-d elements of F_{p^d}; the minimal
    # polynomial of an orbit has prime-field coefficients.
    p = field.p
    ext = gf.field_create(p, d)
    proper = [d // ell for ell in arith.factorize(d).distinct_primes()]
    seen = set()
    polys = []
    for idx in range(ext.order):
        if idx in seen:
            continue
        e = ext.from_index(idx)
        conj = [e]
        cur = e
        for _ in range(d - 1):
            cur = cur**p
            conj.append(cur)
        orbit = {c.pack() for c in conj}
        seen |= orbit
        if len(orbit) != d:
            continue  # lives in a proper subfield
        acc = [ext.one()]
        for c in conj:
            nxt = [ext.zero()] * (len(acc) + 1)
            for i, a in enumerate(acc):
                nxt[i + 1] = nxt[i + 1] + a
                nxt[i] = nxt[i] - a * c
            acc = nxt
        coeffs = []
        for a in acc:
            assert not any(a.coords[1:]), "minimal polynomial not over F_p"
            coeffs.append(a.coords[0])
        polys.append(Poly(field, coeffs))
    return polys


def _sieve_irreducibles(field: gf.FiniteField, d: int) -> list[Poly]:
    q = field.order
    if d == 1:
        return [Poly(field, [field.from_index(i), 1]) for i in range(q)]
    polys = []
    for packed in range(q**d):
        coeffs = []
        v = packed
        for _ in range(d):
            v, r = divmod(v, q)
            coeffs.append(field.from_index(r))
        f = Poly(field, coeffs + [field.one()])
        if f.is_irreducible():
            polys.append(f)
    return polys


def places(field: gf.FiniteField, n: int) -> list[Place]:
    """All places of F_q(t) of degree n; infinity comes first when n = 1."""
    out = [Place(pi) for pi in monic_irreducibles(field, n)]
    if n == 1:
        return [infinity_place()] + out
    return out


def valuation(f: RationalFunction | Poly, place: Place):
    """The place-adic valuation; +inf on the zero function."""
    if isinstance(f, Poly):
        f = RationalFunction(f)
    if not f.num:
        return math.inf
    if place.is_infinite:
        return f.den.degree - f.num.degree
    pi = place.pi

    def mult(poly: Poly) -> int:
        m = 0
        while True:
            q, r = poly.divmod(pi)
            if r:
                return m
            m += 1
            poly = q

    m = mult(f.num)
    if m:
        return m
    return -mult(f.den)


def place_roots(
    place: Place, target: gf.FiniteField, base: gf.FiniteField
) -> list[gf.FieldElement]:
    """All roots of the place polynomial in the target field, ascending."""
    pi = place.pi
    key = ("place", base.modulus, _poly_key(pi))
    cache = target._embed_roots
    if key not in cache:
        if base.k == 1:
            coeffs = [target.element(c.coords[0]) for c in pi.coeffs]
        else:
            coeffs = [gf.embed(c, target) for c in pi.coeffs]
        roots = []
        for idx in range(target.order):
            e = target.from_index(idx)
            acc = target.zero()
            for c in reversed(coeffs):
                acc = acc * e + c
            if not acc:
                roots.append(e)
                if len(roots) == pi.degree:
                    break
        cache[key] = roots
    return cache[key]


def specialize(
    f: RationalFunction | Poly,
    place: Place,
    target: gf.FiniteField,
    root_index: int = 0,
) -> gf.FieldElement:
    """Image of f in the residue field at the place, inside the target field.

    The root of the place polynomial is the least in packed order unless
    root_index selects a Galois conjugate (any conjugate gives an isomorphic
    fiber; censuses are checked to be invariant under the choice).
    """
    if isinstance(f, Poly):
        f = RationalFunction(f)
    base = f.field
    v = valuation(f, place)
    if v is not math.inf and v < 0:
        raise PoleAtPlace(f"pole of order {-v} at {place!r}")
    if base.p != target.p or (target.k % (place.degree * base.k)) != 0:
        raise ValueError("target field does not contain the residue field")
    if place.is_infinite:
        if v is math.inf or v > 0:
            return target.zero()
        c = f.num.leading() / f.den.leading()
        return gf.embed(c, target) if base.k > 1 else target.element(c.coords[0])
    r = place_roots(place, target, base)[root_index]
    num = f.num.evaluate(r)
    den = f.den.evaluate(r)
    return num / den


def is_constant(f: RationalFunction) -> bool:
    """True iff f lies in the constant field F_q."""
    return f.is_constant()


# ---------------------------------------------------------------------------
# text grammar: "t^3 - t^2 + 2*t", extension coefficients as "[c0,c1]*t^2"

_TERM_RE = re.compile(
    r"""^\s*
    (?:(?P<coeff>\[[-\d,\s]*\]|\d+)\s*\*?\s*)?   # optional coefficient
    (?:(?P<var>t)(?:\^(?P<exp>\d+))?)?           # optional t power
    \s*$""",
    re.VERBOSE,
)


def _split_top_level(text: str, seps: str) -> list[tuple[str, str]]:
    """Split into (sign/sep, chunk) pairs at top-level separator characters."""
    parts = []
    depth = 0
    cur = []
    pending = ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in seps:
            parts.append((pending, "".join(cur)))
            pending = ch
            cur = []
        else:
            cur.append(ch)
    parts.append((pending, "".join(cur)))
    return parts


def parse_poly(text: str, field: gf.FiniteField) -> Poly:
    """Parse the polynomial grammar into a Poly over the given field."""
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        inner = text[1:-1]
        if all(d >= 0 for d in _depths(inner)):
            text = inner
    coeffs: dict[int, gf.FieldElement] = {}
    for sign, chunk in _split_top_level(text, "+-"):
        if not chunk.strip():
            if sign.strip():
                raise ValueError(f"dangling sign in {text!r}")
            continue
        m = _TERM_RE.match(chunk)
        if not m or (m.group("coeff") is None and m.group("var") is None):
            raise ValueError(f"cannot parse term {chunk!r}")
        c = (
            gf.parse_element(field, m.group("coeff"))
            if m.group("coeff")
            else field.one()
        )
        if sign == "-":
            c = -c
        e = 0
        if m.group("var"):
            e = int(m.group("exp")) if m.group("exp") else 1
        coeffs[e] = coeffs.get(e, field.zero()) + c
    deg = max(coeffs, default=0)
    return Poly(field, [coeffs.get(i, field.zero()) for i in range(deg + 1)])


def _depths(text: str) -> list[int]:
    depth = 0
    out = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        out.append(depth)
    return out


def parse_ratfn(text: str, field: gf.FiniteField) -> RationalFunction:
    """Parse "num / den" (single top-level slash) or a bare polynomial."""
    parts = _split_top_level(text, "/")
    if len(parts) == 1:
        return RationalFunction(parse_poly(text, field))
    if len(parts) > 2:
        raise ValueError("at most one top-level '/' supported")
    (_, num), (_, den) = parts
    return RationalFunction(parse_poly(num, field), parse_poly(den, field))
