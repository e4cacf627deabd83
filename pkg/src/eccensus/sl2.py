"""Subgroups of SL2(Z/mZ): closure, reduction kernels, and the explicit
union-of-kernels constructions that characterize zero density.

Matrices are (a, b, c, d) tuples reduced mod m with determinant 1; subgroups
are explicit sorted element sets (every group handled here is tiny) with a
breadth-first closure as the only construction primitive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import arith
from .errors import ClosureTooLarge, NotASubgroup, NotDetOne, TooFewPrimeFactors

_CLOSURE_CAP = 10**6

Entry = tuple[int, int, int, int]


@dataclass(frozen=True)
class MatrixModM:
    """A determinant-1 matrix [[a, b], [c, d]] over Z/mZ."""

    m: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "a", self.a % self.m)
        object.__setattr__(self, "b", self.b % self.m)
        object.__setattr__(self, "c", self.c % self.m)
        object.__setattr__(self, "d", self.d % self.m)
        if (self.a * self.d - self.b * self.c) % self.m != 1 % self.m:
            raise NotDetOne(f"det != 1 mod {self.m}")

    def entries(self) -> Entry:
        return (self.a, self.b, self.c, self.d)


def _mul(x: Entry, y: Entry, m: int) -> Entry:
    a, b, c, d = x
    e, f, g, h = y
    return (
        (a * e + b * g) % m,
        (a * f + b * h) % m,
        (c * e + d * g) % m,
        (c * f + d * h) % m,
    )


def _inv(x: Entry, m: int) -> Entry:
    a, b, c, d = x
    return (d % m, -b % m, -c % m, a % m)


def _identity(m: int) -> Entry:
    return (1 % m, 0, 0, 1 % m)


@dataclass(frozen=True)
class SubgroupH:
    """A subgroup of SL2(Z/mZ) as a canonical sorted element tuple."""

    m: int
    elements: tuple[Entry, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, x: Entry) -> bool:
        return x in set(self.elements)


def validate_subgroup(h: SubgroupH) -> None:
    """Check closure, inverses, identity, determinant and Lagrange."""
    elems = set(h.elements)
    if _identity(h.m) not in elems:
        raise NotASubgroup("missing identity")
    for x in h.elements:
        if (x[0] * x[3] - x[1] * x[2]) % h.m != 1 % h.m:
            raise NotDetOne("element with det != 1")
        if _inv(x, h.m) not in elems:
            raise NotASubgroup("not closed under inverse")
        for y in h.elements:
            if _mul(x, y, h.m) not in elems:
                raise NotASubgroup("not closed under multiplication")
    if arith.sl2_group_order(h.m) % len(elems) != 0:
        raise NotASubgroup("order does not divide |SL2(Z/mZ)|")


def subgroup_closure(generators, m: int) -> SubgroupH:
    """Smallest subgroup containing the generators (breadth-first)."""
    gens = []
    for g in generators:
        if isinstance(g, MatrixModM):
            if g.m != m:
                raise ValueError("generator modulus mismatch")
            gens.append(g.entries())
        else:
            gens.append(MatrixModM(m, *g).entries())
    ident = _identity(m)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _mul(x, g, m)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > _CLOSURE_CAP:
                        raise ClosureTooLarge(f"closure exceeds {_CLOSURE_CAP}")
        frontier = nxt
    return SubgroupH(m, tuple(sorted(seen)))


def kernel_subgroup(h: SubgroupH, modulus: int) -> SubgroupH:
    """H intersected with the kernel of reduction mod the given modulus."""
    ident = _identity(max(modulus, 1))
    kept = tuple(
        x for x in h.elements if tuple(v % modulus for v in x) == ident
    ) if modulus > 1 else h.elements
    return SubgroupH(h.m, kept)


def kernel_filtration(h: SubgroupH) -> dict[int, SubgroupH]:
    """H_l = H ∩ ker(reduction mod l) for each prime l dividing m."""
    if h.m <= 1:
        raise ValueError("modulus must exceed 1")
    return {
        ell: kernel_subgroup(h, ell)
        for ell, _ in arith.factorize(h.m).primes
    }


def is_union_of_kernels(h: SubgroupH) -> bool:
    """True iff every element of H is trivial mod some prime l | m."""
    kernels = kernel_filtration(h)
    union = set()
    for sub in kernels.values():
        union |= set(sub.elements)
    return union == set(h.elements)


def _crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        g = math.gcd(m, n)
        assert g == 1
        x += (r - x) * pow(m, -1, n) % n * m
        m *= n
    return x % m


def construct_union_subgroup(q: int) -> SubgroupH:
    """The order-4 subgroup of SL2(Z/(q-1)Z) that is a union of its
    reduction kernels, when q - 1 has at least 3 distinct prime factors.

    For even q (so q - 1 odd) the group is scalar: diag(x_i) with
    x_i = 1 mod q_i and -1 mod the other blocks.  For odd q it is
    {+-I, [[+-r, (q-1)/2], [0, +-r]]} with r = 1 mod 2^alpha, 1 mod q_1
    and -1 mod q_2.  Prime-power components are taken ascending; extra
    components fold into the last block.
    """
    qfac = arith.factorize(q)
    if len(qfac.primes) != 1:
        raise ValueError("q must be a prime power")
    p = qfac.primes[0][0]
    n = q - 1
    nfac = arith.factorize(n)
    if len(nfac.primes) < 3:
        raise TooFewPrimeFactors(
            f"q - 1 = {n} has {len(nfac.primes)} distinct prime factors, need 3"
        )
    comps = [ell**e for ell, e in nfac.primes]
    if p == 2:
        blocks = [comps[0], comps[1], math.prod(comps[2:])]
        mats = [_identity(n)]
        for i in range(3):
            residues = [1 if i == j else -1 % blocks[j] for j in range(3)]
            x = _crt(residues, blocks)
            mats.append((x, 0, 0, x))
    else:
        alpha_block = comps[0]  # 2^alpha: q odd so 2 | q - 1
        assert alpha_block % 2 == 0
        odd = comps[1:]
        q1, q2 = odd[0], math.prod(odd[1:])
        r = _crt([1, 1, -1 % q2], [alpha_block, q1, q2])
        b = n // 2
        mats = [
            _identity(n),
            (n - 1, 0, 0, n - 1),
            (r, b, 0, r),
            (n - r, b, 0, n - r),
        ]
    h = SubgroupH(n, tuple(sorted(mats)))
    validate_subgroup(h)
    if h.order != 4 or any(_mul(x, x, n) != _identity(n) for x in h.elements):
        raise AssertionError("construction must give (Z/2)^2")
    if not is_union_of_kernels(h):
        raise AssertionError("construction must be a union of its kernels")
    return h


# ---------------------------------------------------------------------------
# enumeration helpers for the sweep tests


def all_sl2_elements(m: int):
    """Every (a, b, c, d) with det 1 mod m, lexicographic order."""
    out = []
    for a in range(m):
        for b in range(m):
            for c in range(m):
                # a*d - b*c = 1 -> solve for d when possible
                for d in range(m):
                    if (a * d - b * c) % m == 1 % m:
                        out.append((a, b, c, d))
    return out


def cyclic_subgroups(m: int) -> list[SubgroupH]:
    """All distinct cyclic subgroups, each from its first generator."""
    seen = set()
    out = []
    for g in all_sl2_elements(m):
        cur = g
        elems = {_identity(m)}
        while cur not in elems:
            elems.add(cur)
            cur = _mul(cur, g, m)
        key = tuple(sorted(elems))
        if key not in seen:
            seen.add(key)
            out.append(SubgroupH(m, key))
    return out


def generated_subgroups(m: int, max_reps: int = 40) -> list[SubgroupH]:
    """A deterministic deduplicated family of subgroups: all cyclic ones
    plus pairwise joins of the first max_reps cyclic generators."""
    cyc = cyclic_subgroups(m)
    subs = {h.elements: h for h in cyc}
    reps = [h.elements[-1] if h.order > 1 else _identity(m) for h in cyc[:max_reps]]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            h = subgroup_closure([MatrixModM(m, *reps[i]), MatrixModM(m, *reps[j])], m)
            subs.setdefault(h.elements, h)
    return sorted(subs.values(), key=lambda h: (h.order, h.elements))


# ---------------------------------------------------------------------------
# file format


def subgroup_to_json(h: SubgroupH) -> dict:
    return {"m": h.m, "elements": [list(e) for e in h.elements]}


def subgroup_from_json(data: dict) -> SubgroupH:
    if "elements" in data:
        h = SubgroupH(int(data["m"]), tuple(sorted(tuple(int(v) for v in e) for e in data["elements"])))
        validate_subgroup(h)
        return h
    gens = [MatrixModM(int(data["m"]), *(int(v) for v in g)) for g in data["generators"]]
    return subgroup_closure(gens, int(data["m"]))


def load_subgroup(path: str) -> SubgroupH:
    with open(path) as fh:
        return subgroup_from_json(json.load(fh))
