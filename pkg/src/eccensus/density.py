"""Theoretical densities of cyclic reductions, in exact rational arithmetic.

delta(n) sums mu(m) ord_m(q) / [K(E[m]) : K] over the admissible squarefree
moduli m | q^n - 1 (Hasse-bounded or not), under a pluggable model of the
torsion field degrees:

* generic - degree ord_m(q) * |SL2(Z/mZ)| for every m;
* subgroup - the primes of q - 1 are exceptional, with degrees read off a
  subgroup H of SL2(Z/(q-1)Z) through its reduction kernels;
* constant-torsion - one prime l0 whose torsion field is the constant-field
  extension of degree c0, all other primes generic;
* table - explicit user-supplied degrees.

g(n) is q^n times the bounded generic density.  Everything is a Fraction;
decimal output is rendering only, round-half-even.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, sl2
from .errors import MissingDegree, NotCoprimeToP


def render_decimal(x: Fraction, places: int = 2) -> str:
    """Exact round-half-even rendering of a rational to fixed places."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    scale = 10**places
    whole, rem = divmod(x.numerator * scale, x.denominator)
    if 2 * rem > x.denominator or (2 * rem == x.denominator and whole % 2 == 1):
        whole += 1
    digits = str(whole).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


class DegreeModel:
    """Base: a map m -> [K(E[m]) : K] on squarefree m coprime to p."""

    kind = "abstract"

    def __init__(self, q: int):
        self.q = q
        self.p = arith.factorize(q).primes[0][0]

    def degree_of(self, m: int) -> int:
        if m < 1:
            raise ValueError("modulus must be positive")
        if math.gcd(m, self.q) != 1:
            raise NotCoprimeToP(f"gcd({m}, q) != 1")
        if m == 1:
            return 1
        d = self._degree(m)
        if d % arith.mult_order(self.q, m) != 0:
            raise AssertionError("degree must be divisible by the constant part")
        return d

    def _degree(self, m: int) -> int:
        raise NotImplementedError

    @property
    def torsion_conductor(self) -> int:
        """Product of the exceptional primes (M)."""
        return 1

    @property
    def conductor_order_lcm(self) -> int:
        """lcm of ord_l(q) over the exceptional primes (N)."""
        return 1


class GenericIgusa(DegreeModel):
    """Every prime generic: [K(E[m]) : K] = ord_m(q) * |SL2(Z/mZ)|."""

    kind = "generic"

    def _degree(self, m: int) -> int:
        return arith.mult_order(self.q, m) * arith.sl2_group_order(m)


class SubgroupModel(DegreeModel):
    """Exceptional primes exactly those dividing q - 1, with the degrees of
    the m' | q - 1 part read from a subgroup H of SL2(Z/(q-1)Z)."""

    kind = "subgroup"

    def __init__(self, q: int, h: "sl2.SubgroupH"):
        super().__init__(q)
        if h.m != q - 1:
            raise ValueError("subgroup modulus must be q - 1")
        self.h = h
        self._kernel_orders = {}

    def _part_degree(self, m_prime: int) -> int:
        # [K(E[m']) : K] = |H| / |H ∩ ker(reduction mod m')|
        if m_prime not in self._kernel_orders:
            self._kernel_orders[m_prime] = len(sl2.kernel_subgroup(self.h, m_prime).elements)
        return len(self.h.elements) // self._kernel_orders[m_prime]

    def _degree(self, m: int) -> int:
        m_prime = math.gcd(m, self.q - 1)
        m0 = m // m_prime
        generic = arith.mult_order(self.q, m0) * arith.sl2_group_order(m0)
        return generic * self._part_degree(m_prime)

    @property
    def torsion_conductor(self) -> int:
        out = 1
        for ell, _ in arith.factorize(self.q - 1).primes:
            out *= ell
        return out

    @property
    def conductor_order_lcm(self) -> int:
        out = 1
        for ell, _ in arith.factorize(self.q - 1).primes:
            out = math.lcm(out, arith.mult_order(self.q, ell))
        return out


class ConstantTorsion(DegreeModel):
    """One exceptional prime l0 with K(E[l0]) the degree-c0 constant-field
    extension; all other primes generic."""

    kind = "constant"

    def __init__(self, q: int, ell0: int, c0: int):
        super().__init__(q)
        if not arith.is_prime(ell0):
            raise ValueError("l0 must be prime")
        if c0 % arith.mult_order(q, ell0) != 0:
            raise ValueError("c0 must be a multiple of ord_l0(q)")
        self.ell0 = ell0
        self.c0 = c0

    def _degree(self, m: int) -> int:
        if m % self.ell0 == 0:
            rest = m // self.ell0
            const_part = math.lcm(self.c0, arith.mult_order(self.q, rest))
            return const_part * arith.sl2_group_order(rest)
        return arith.mult_order(self.q, m) * arith.sl2_group_order(m)

    @property
    def torsion_conductor(self) -> int:
        return self.ell0

    @property
    def conductor_order_lcm(self) -> int:
        return arith.mult_order(self.q, self.ell0)


class UserTable(DegreeModel):
    """Degrees looked up from an explicit table; errors on a missing m."""

    kind = "table"

    def __init__(self, q: int, table: dict[int, int]):
        super().__init__(q)
        self.table = {int(k): int(v) for k, v in table.items()}

    def _degree(self, m: int) -> int:
        if m not in self.table:
            raise MissingDegree(f"no degree entry for m = {m}")
        return self.table[m]


def degree_of(model: DegreeModel, m: int) -> int:
    return model.degree_of(m)


def delta_n(model: DegreeModel, n: int, bounded: bool = True) -> Fraction:
    """delta(E/K, 1, n) = sum of mu(m) ord_m(q) / degree(m) over admissible m."""
    total = Fraction(0)
    for m in arith.admissible_moduli(model.q, n, bounded).moduli:
        mu = arith.moebius(m)
        if mu == 0:
            continue
        total += Fraction(mu * arith.mult_order(model.q, m), model.degree_of(m))
    return total


def g_n(q: int, n: int) -> Fraction:
    """q^n * delta(n) under the generic model with the Hasse-bounded range.

    The Moebius factor is part of the sum: the tabulated reference values
    (g(2) = 23/6, ...) force it even where display formulas omit it.
    """
    return q**n * delta_n(GenericIgusa(q), n, bounded=True)


def delta1_from_subgroup(h: "sl2.SubgroupH", q: int) -> Fraction:
    """delta(E/K, 1, 1) for the subgroup model: the inclusion-exclusion sum
    over m | q - 1, asserted equal to the direct complement count
    |H \\ union of the H_l| / |H|."""
    sl2.validate_subgroup(h)
    if h.m != q - 1:
        raise ValueError("subgroup modulus must be q - 1")
    order = len(h.elements)
    total = Fraction(0)
    for m in arith.factorize(q - 1).squarefree_divisors():
        mu = arith.moebius(m)
        kernel = sl2.kernel_subgroup(h, m)
        total += Fraction(mu * len(kernel.elements), order)
    # direct complement count through the kernel filtration
    union = set()
    for sub in sl2.kernel_filtration(h).values():
        union |= set(sub.elements)
    direct = Fraction(order - len(union), order)
    if total != direct:
        raise AssertionError("inclusion-exclusion disagrees with the direct count")
    return total


def epsilon_lower_bound(delta1: Fraction, q: int, conductor: int, cutoff: int) -> Fraction:
    """delta1 times the product of (1 - 1/(l(l^2 - 1))) over primes
    l <= cutoff not dividing p*conductor: a lower bound for the density
    epsilon, monotone nonincreasing in the cutoff."""
    p = arith.factorize(q).primes[0][0]
    out = Fraction(delta1)
    ell = 2
    while ell <= cutoff:
        if arith.is_prime(ell) and (p * conductor) % ell != 0:
            out *= Fraction(ell * (ell * ell - 1) - 1, ell * (ell * ell - 1))
        ell += 1
    return out


# ---------------------------------------------------------------------------
# model specification files (JSON)


def model_to_json(model: DegreeModel) -> dict:
    out = {"kind": model.kind, "q": model.q}
    if isinstance(model, SubgroupModel):
        out["m"] = model.h.m
        out["elements"] = [list(e) for e in model.h.elements]
    elif isinstance(model, ConstantTorsion):
        out["l0"] = model.ell0
        out["c0"] = model.c0
    elif isinstance(model, UserTable):
        out["table"] = {str(k): v for k, v in model.table.items()}
    return out


def model_from_json(data: dict) -> DegreeModel:
    kind = data["kind"]
    q = int(data["q"])
    if kind == "generic":
        return GenericIgusa(q)
    if kind == "subgroup":
        if "elements" in data:
            h = sl2.SubgroupH(int(data["m"]), tuple(tuple(e) for e in data["elements"]))
            sl2.validate_subgroup(h)
        else:
            gens = [sl2.MatrixModM(int(data["m"]), *g) for g in data["generators"]]
            h = sl2.subgroup_closure(gens, int(data["m"]))
        return SubgroupModel(q, h)
    if kind == "constant":
        return ConstantTorsion(q, int(data["l0"]), int(data["c0"]))
    if kind == "table":
        return UserTable(q, {int(k): int(v) for k, v in data["table"].items()})
    raise ValueError(f"unknown model kind {kind!r}")


def load_model(path: str) -> DegreeModel:
    with open(path) as fh:
        return model_from_json(json.load(fh))
