"""Exact integer utilities.

Factorization, the Moebius function, multiplicative orders, orders of
SL2(Z/mZ), the admissible torsion moduli entering the density sums, and
counts of places of the rational function field.  Everything here is pure
integer arithmetic: no floats anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotCoprime, TooLarge

# Deterministic Miller-Rabin witnesses: proven complete below 3.3 * 10**24
# (~2**81), which covers every value this library produces; larger 128-bit
# inputs are accepted and classified with the same witness set.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_MAX_INPUT = 1 << 128


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for desk-scale integers."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Find a nontrivial factor of composite n.

    Brent's cycle variant with deterministically increasing polynomial
    offsets, so repeated runs factor identically.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")  # unreachable at desk scale


@dataclass(frozen=True)
class Factorization:
    """A positive integer with its prime factorization, primes ascending."""

    value: int
    primes: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        for p, e in self.primes:
            prod *= p**e
        if prod != self.value:
            raise ValueError("factorization does not multiply back")

    def distinct_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.primes)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.primes)

    def valuation(self, p: int) -> int:
        for q, e in self.primes:
            if q == p:
                return e
        return 0

    def divisors(self) -> list[int]:
        """All positive divisors, ascending."""
        divs = [1]
        for p, e in self.primes:
            divs = [d * p**i for d in divs for i in range(e + 1)]
        return sorted(divs)

    def squarefree_divisors(self) -> list[int]:
        """All squarefree positive divisors, ascending."""
        divs = [1]
        for p, _ in self.primes:
            divs += [d * p for d in divs]
        return sorted(divs)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Canonical ascending factorization of n >= 1 (trial division + rho)."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n >= _MAX_INPUT:
        raise TooLarge(f"{n} does not fit in 128 bits")
    factors: dict[int, int] = {}
    m = n
    for p in _MR_WITNESSES:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
    # trial divide a little further before handing off to rho
    d = 41
    while d * d <= m and d < 10_000:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 2
    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack += [d, m // d]
    return Factorization(n, tuple(sorted(factors.items())))


def moebius(m: int) -> int:
    """Moebius function: 0 on non-squarefree m, else (-1)^(#prime factors)."""
    if m < 1:
        raise ValueError("moebius requires m >= 1")
    fac = factorize(m)
    if not fac.is_squarefree():
        return 0
    return -1 if len(fac.primes) % 2 else 1


def _carmichael(fac: Factorization) -> int:
    """Carmichael function lambda(m) from the factorization of m."""
    lam = 1
    for p, e in fac.primes:
        if p == 2:
            block = 1 if e == 1 else 2 if e == 2 else 2 ** (e - 2)
        else:
            block = p ** (e - 1) * (p - 1)
        lam = math.lcm(lam, block)
    return lam


def mult_order(q: int, m: int) -> int:
    """Least r >= 1 with q^r = 1 mod m.

    The exponent lambda(m) is reduced prime-by-prime, so no loop ever runs
    past the number of prime factors of lambda(m).
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return 1
    if math.gcd(q, m) != 1:
        raise NotCoprime(f"gcd({q}, {m}) != 1")
    r = _carmichael(factorize(m))
    for p, _ in factorize(r).primes:
        while r % p == 0 and pow(q, r // p, m) == 1:
            r //= p
    return r


def sl2_group_order(m: int) -> int:
    """|SL2(Z/mZ)| = m^3 * prod over primes l | m of (1 - l^-2), exactly."""
    if m < 1:
        raise ValueError("modulus must be positive")
    order = m**3
    for p, _ in factorize(m).primes:
        order = order // (p * p) * (p * p - 1)
    return order


@dataclass(frozen=True)
class ModulusList:
    """Squarefree torsion moduli admissible for (q, n).

    Every m divides q^n - 1 (so gcd(m, q) = 1 automatically); with
    ``bounded`` set, m also passes the exact integer Hasse test
    (m - 1)^2 <= q^n, equivalent to m <= q^(n/2) + 1 for integers.
    """

    q: int
    n: int
    bounded: bool
    moduli: tuple[int, ...]

    def __post_init__(self):
        qn = self.q**self.n
        for m in self.moduli:
            if (qn - 1) % m != 0:
                raise ValueError(f"{m} does not divide q^n - 1")
            if self.bounded and (m - 1) ** 2 > qn:
                raise ValueError(f"{m} violates the Hasse bound")


def admissible_moduli(q: int, n: int, bounded: bool = True) -> ModulusList:
    """Squarefree divisors m of q^n - 1, optionally Hasse-bounded.

    Non-squarefree divisors are omitted: the Moebius factor kills their
    terms in every sum this feeds.  The modulus set divides q^n - 1; the
    summation range m | q^(n-1) sometimes quoted for the same sums is
    inconsistent with the tabulated density values and is not used.
    """
    if q < 2 or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    qn = q**n
    if qn >= _MAX_INPUT:
        raise TooLarge("q^n does not fit in 128 bits")
    divs = factorize(qn - 1).squarefree_divisors()
    if bounded:
        divs = [m for m in divs if (m - 1) ** 2 <= qn]
    return ModulusList(q, n, bounded, tuple(divs))


def monic_irreducible_count(q: int, d: int) -> int:
    """Number of monic irreducible degree-d polynomials over F_q."""
    if q < 2 or d < 1:
        raise ValueError("need q >= 2 and d >= 1")
    total = sum(moebius(e) * q ** (d // e) for e in factorize(d).divisors())
    assert total % d == 0
    return total // d


def rational_place_count(q: int, n: int) -> int:
    """Number of degree-n places of F_q(t): monic irreducibles of degree n,
    plus the place at infinity when n = 1."""
    return monic_irreducible_count(q, n) + (1 if n == 1 else 0)
