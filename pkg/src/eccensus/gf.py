"""Finite fields F_{p^k} with a canonical defining polynomial.

Elements are dense coefficient vectors over F_p reduced modulo the defining
polynomial.  The canonical polynomial for (p, k) is the lexicographically
least monic irreducible of degree k, comparing coefficient tuples read from
the constant term upward, which makes every construction reproducible.
Residue fields of places are built with an explicit modulus instead.

Quadratic equations are solved exactly: by the Artin-Schreier trace
criterion in characteristic 2 and by the quadratic character plus a
Tonelli-Shanks square root in odd characteristic.  Subfield embeddings are
computed (never assumed) by sending the source generator to the least root
of its defining polynomial in the target.
"""

from __future__ import annotations

import math
from functools import lru_cache

from . import arith
from .errors import NotPrime, NotSubfield, TooLarge

_MAX_FIELD = 1 << 40


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, index = degree)


def _ptrim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pdivmod(a: list[int], f: list[int], p: int) -> tuple[list[int], list[int]]:
    # returns (a // f, a mod f) for f != 0
    a = a[:]
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    if len(a) - 1 < df:
        return [], a
    q = [0] * (len(a) - df)
    while a and len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        q[shift] = c
        if c:
            for i, fi in enumerate(f):
                a[shift + i] = (a[shift + i] - c * fi) % p
        a.pop()
        _ptrim(a)
    return q, a


def _pmod(a: list[int], f: list[int], p: int) -> list[int]:
    return _pdivmod(a, f, p)[1]


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    b = _pmod(base[:], f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, b, p), f, p)
        b = _pmod(_pmul(b, b, p), f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = a[:], b[:]
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Irreducibility over F_p via x^(p^j) Frobenius iterates."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    u = x[:]
    iterates = {}
    for j in range(1, k + 1):
        u = _ppowmod(u, p, f, p)
        iterates[j] = u[:]
    if iterates[k] != _pmod(x[:], f, p):
        return False
    for ell in {q for q, _ in arith.factorize(k).primes}:
        diff = iterates[k // ell][:]
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        _ptrim(diff)
        if len(_pgcd(f, diff, p)) != 1:
            return False
    return True


@lru_cache(maxsize=256)
def _canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lex-least monic irreducible of degree k over F_p.

    Tuples (c0, .., c_{k-1}) are compared with the constant term most
    significant; for k = 1 this yields the polynomial x.
    """
    if k == 1:
        return (0, 1)
    for packed in range(p**k):
        # c0 occupies the most significant digit so ascending packed order
        # is exactly lexicographic order on (c0, .., c_{k-1})
        c = []
        v = packed
        for i in range(k - 1, -1, -1):
            c.append(v // p**i)
            v %= p**i
        f = c + [1]
        if f[0] == 0:
            continue  # divisible by x
        if any(_peval_int(f, a, p) == 0 for a in range(p)):
            continue  # linear factor; skip the expensive Frobenius test
        if _is_irreducible(f, p):
            return tuple(f)
    raise ArithmeticError("no irreducible polynomial found")  # unreachable


def _peval_int(f: list[int], a: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * a + c) % p
    return acc


class FiniteField:
    """The field F_{p^k} given by a monic irreducible modulus over F_p."""

    __slots__ = (
        "p",
        "k",
        "order",
        "modulus",
        "_red",
        "_gen",
        "_as_solver",
        "_nonresidue",
        "_embed_roots",
        "_sqrt_exp",
    )

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | None = None):
        if not arith.is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if k < 1:
            raise ValueError("degree must be >= 1")
        if p**k > _MAX_FIELD:
            raise TooLarge(f"{p}^{k} exceeds the 2^40 cap")
        if modulus is None:
            modulus = _canonical_modulus(p, k)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not _is_irreducible(list(modulus), p):
            raise ValueError("modulus is not irreducible")
        self.p = p
        self.k = k
        self.order = p**k
        self.modulus = modulus
        # reduction rows: x^(k+i) mod modulus for i = 0..k-2
        red = []
        cur = [(-c) % p for c in modulus[:-1]]  # x^k
        red.append(tuple(cur))
        for _ in range(k - 2):
            cur = [0] + cur
            if cur[-1]:
                lead = cur.pop()
                cur = [(ci + lead * ri) % p for ci, ri in zip(cur, red[0])]
            else:
                cur.pop()
            red.append(tuple(cur))
        self._red = tuple(red)
        self._gen = None
        self._as_solver = None
        self._nonresidue = None
        self._embed_roots = {}
        self._sqrt_exp = None

    # -- construction of elements ------------------------------------------

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is self or value.field == self:
                return value
            raise ValueError("element of a different field")
        if isinstance(value, int):
            coords = [0] * self.k
            coords[0] = value % self.p
            return FieldElement(self, tuple(coords))
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) > self.k:
            raise ValueError("too many coordinates")
        coords = coords + (0,) * (self.k - len(coords))
        return FieldElement(self, coords)

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def gen(self) -> "FieldElement":
        """The class of x modulo the defining polynomial."""
        if self.k == 1:
            return self.element((-self.modulus[0]) % self.p)
        return self.element((0, 1))

    def from_index(self, idx: int) -> "FieldElement":
        """Element with packed index idx = sum c_i p^i."""
        coords = []
        for _ in range(self.k):
            idx, r = divmod(idx, self.p)
            coords.append(r)
        return FieldElement(self, tuple(coords))

    def elements(self):
        """All field elements in ascending packed order."""
        for idx in range(self.order):
            yield self.from_index(idx)

    # -- internal arithmetic on coordinate tuples --------------------------

    def _add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def _mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        out = list(prod[:k])
        for i in range(k - 1, 0, -1):
            c = prod[k + i - 1]
            if c:
                row = self._red[i - 1]
                for j in range(k):
                    out[j] = (out[j] + c * row[j]) % p
        return tuple(out)

    def _inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        p = self.p
        # extended Euclid on (modulus, a) over F_p[x]; track coefficients of a
        r0, r1 = list(self.modulus), _ptrim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            qs1 = _pmul(q, s1, p)
            width = max(len(s0), len(qs1))
            s0, s1 = s1, _ptrim(
                [
                    ((s0[i] if i < len(s0) else 0) - (qs1[i] if i < len(qs1) else 0)) % p
                    for i in range(width)
                ]
            )
        # r0 is the gcd, a nonzero constant; s0 is the Bezout factor of a
        c = pow(r0[0], -1, p)
        out = [x * c % p for x in s0]
        out += [0] * (self.k - len(out))
        return tuple(out[: self.k])

    # -- named queries ------------------------------------------------------

    def multiplicative_generator(self) -> "FieldElement":
        """Least packed generator of the cyclic group F_{p^k}^*."""
        if self._gen is not None:
            return self._gen
        qm1 = self.order - 1
        prims = arith.factorize(qm1).distinct_primes() if qm1 > 1 else ()
        for idx in range(1, self.order):
            g = self.from_index(idx)
            if all((g ** (qm1 // ell)).pack() != 1 for ell in prims):
                self._gen = g
                return g
        raise ArithmeticError("no generator found")  # unreachable

    def absolute_trace(self, e: "FieldElement") -> int:
        """Trace down to F_p as an integer in [0, p)."""
        acc = e
        cur = e
        for _ in range(self.k - 1):
            cur = cur**self.p
            acc = acc + cur
        return acc.coords[0]

    def _artin_schreier_solver(self):
        # column-reduced basis for the F_2-linear map z -> z^2 + z
        if self._as_solver is None:
            pivots = []  # (pivot bit, image packed, preimage packed)
            for j in range(self.k):
                b = self.from_index(1 << j)
                img = (b * b + b).pack()
                pre = 1 << j
                for pb, pi, pp in pivots:
                    if img >> pb & 1:
                        img ^= pi
                        pre ^= pp
                if img:
                    pivots.append((img.bit_length() - 1, img, pre))
            self._as_solver = pivots
        return self._as_solver

    def _solve_artin_schreier(self, d: "FieldElement"):
        """One solution of z^2 + z = d, or None when the trace is 1."""
        v = d.pack()
        pre = 0
        for pb, pi, pp in self._artin_schreier_solver():
            if v >> pb & 1:
                v ^= pi
                pre ^= pp
        if v:
            return None
        return self.from_index(pre)

    def quadratic_character(self, a: "FieldElement") -> int:
        """chi(a) in {-1, 0, 1} for odd characteristic."""
        if self.p == 2:
            raise ValueError("quadratic character needs odd characteristic")
        if not a:
            return 0
        v = a ** ((self.order - 1) // 2)
        return 1 if v.pack() == 1 else -1

    def sqrt(self, a: "FieldElement") -> "FieldElement | None":
        """A square root of a, or None; odd characteristic Tonelli-Shanks,
        Frobenius power in characteristic 2 (where squaring is bijective)."""
        if self.p == 2:
            return a ** (self.order // 2)
        if not a:
            return self.zero()
        if self.quadratic_character(a) == -1:
            return None
        q = self.order
        s, m = q - 1, 0
        while s % 2 == 0:
            s //= 2
            m += 1
        if self._nonresidue is None:
            for idx in range(1, q):
                z = self.from_index(idx)
                if self.quadratic_character(z) == -1:
                    self._nonresidue = z
                    break
        c = self._nonresidue**s
        t = a**s
        r = a ** ((s + 1) // 2)
        while t.pack() != 1:
            t2 = t
            i = 0
            for i in range(1, m):
                t2 = t2 * t2
                if t2.pack() == 1:
                    break
            b = c ** (1 << (m - i - 1))
            m = i
            c = b * b
            t = t * c
            r = r * b
        return r

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


class FieldElement:
    """An element of a FiniteField: an immutable coordinate vector."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FiniteField, coords: tuple[int, ...]):
        self.field = field
        self.coords = coords

    def pack(self) -> int:
        idx = 0
        for c in reversed(self.coords):
            idx = idx * self.field.p + c
        return idx

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            return NotImplemented
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._add(self.coords, o.coords))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._sub(self.coords, o.coords))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._sub(o.coords, self.coords))

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.coords))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coords, o.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.coords, self.field._inv(o.coords)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(o.coords, self.field._inv(self.coords)))

    def __pow__(self, e: int):
        if e < 0:
            base = FieldElement(self.field, self.field._inv(self.coords))
            e = -e
        else:
            base = self
        result = self.field.one()
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        return FieldElement(self.field, self.field._inv(self.coords))

    def frobenius(self):
        """x -> x^p, the generator of the Galois group over F_p."""
        return self**self.field.p

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, int):
            return self.coords == self.field.element(other).coords
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coords))

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coords[0])
        return "[" + ",".join(str(c) for c in self.coords) + "]"


# ---------------------------------------------------------------------------
# module-level operations


def field_create(p: int, k: int) -> FiniteField:
    """The canonical field with p^k elements (lex-least defining polynomial)."""
    return FiniteField(p, k)


def quadratic_roots(field: FiniteField, a, b, c) -> list[FieldElement]:
    """All distinct roots in the field of a*y^2 + b*y + c.

    Returns 0, 1 or 2 roots sorted by packed index.  Requires (a, b, c)
    not all zero.
    """
    a, b, c = field.element(a), field.element(b), field.element(c)
    if not a and not b:
        if not c:
            raise ValueError("zero polynomial has every element as a root")
        return []
    if not a:
        return [-c / b]
    if field.p == 2:
        if not b:
            return [field.sqrt(c / a)]
        d = c * a / (b * b)
        z = field._solve_artin_schreier(d)
        if z is None:
            return []
        scale = b / a
        roots = [scale * z, scale * (z + 1)]
    else:
        disc = b * b - 4 * a * c
        chi = field.quadratic_character(disc)
        if chi == -1:
            return []
        if chi == 0:
            return [-b / (2 * a)]
        s = field.sqrt(disc)
        roots = [(-b + s) / (2 * a), (-b - s) / (2 * a)]
    return sorted(roots, key=lambda r: r.pack())


def embedding_roots(source: FiniteField, target: FiniteField) -> list[FieldElement]:
    """All roots of the source defining polynomial in the target, ascending.

    Each root determines one embedding; index 0 is the canonical choice.
    """
    if source.p != target.p or target.k % source.k != 0:
        raise NotSubfield(f"{source} does not embed into {target}")
    key = source.modulus
    if key not in target._embed_roots:
        roots = []
        coeffs = [target.element(c) for c in source.modulus]
        for idx in range(target.order):
            e = target.from_index(idx)
            acc = target.zero()
            for co in reversed(coeffs):
                acc = acc * e + co
            if not acc:
                roots.append(e)
                if len(roots) == source.k:
                    break
        target._embed_roots[key] = roots
    return target._embed_roots[key]


def embed(e: FieldElement, target: FiniteField, root_index: int = 0) -> FieldElement:
    """Image of e under the ring embedding into the target field.

    The source generator goes to the root of the source defining polynomial
    that is least in packed order (root_index 0); other indices select the
    Galois-conjugate embeddings and exist for conjugate-invariance checks.
    """
    source = e.field
    if source == target:
        return target.element(e.coords)
    roots = embedding_roots(source, target)
    r = roots[root_index]
    acc = target.zero()
    for c in reversed(e.coords):
        acc = acc * r + c
    return acc


def parse_element(field: FiniteField, text: str) -> FieldElement:
    """Element text form: an integer, or a coordinate tuple "[c0,c1,...]"."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"unbalanced brackets in {text!r}")
        parts = [s for s in text[1:-1].split(",") if s.strip()]
        return field.element(tuple(int(s) for s in parts))
    return field.element(int(text))
