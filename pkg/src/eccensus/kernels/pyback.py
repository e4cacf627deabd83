"""Pure-Python/numpy kernel backend.

Point counting is vectorized over the x-line with log/exp multiplication
tables; the scalar point work (orders, torsion counts) runs on packed
integers with plain Python loops.  Correctness-equal to the compiled
backend, just slower; the compiled extension is preferred automatically
when it is importable.
"""

from __future__ import annotations

import math

import numpy as np

_INF = None  # scalar point at infinity sentinel


class Ctx:
    """Per-field tables shared by all kernel entry points."""

    def __init__(self, seed: dict):
        self.p = p = seed["p"]
        self.k = k = seed["k"]
        self.q = q = seed["q"]
        self.qm1 = qm1 = q - 1
        self.modulus = seed["modulus"]

        # exp/log tables: one sequential pass of packed multiplications
        red_rows = _reduction_rows(p, k, self.modulus)
        gen = seed["gen"]
        exp = [0] * (2 * qm1)
        log = [0] * q
        cur = 1
        for i in range(qm1):
            exp[i] = cur
            exp[i + qm1] = cur
            log[cur] = i
            cur = _packed_mul(cur, gen, p, k, red_rows)
        assert cur == 1
        self.exp = exp
        self.log = log
        self.nexp = np.array(exp, dtype=np.int64)
        self.nlog = np.array(log, dtype=np.int64)

        if p == 2:
            tmask = seed["trace_mask"]
            idx = np.arange(q, dtype=np.uint64)
            self.ntrace = (np.bitwise_count(idx & np.uint64(tmask)) & 1).astype(np.uint8)
            self.trace = self.ntrace.tolist()
            self.as_pivots = seed["as_pivots"]
        else:
            digits = np.empty((q, k), dtype=np.int64)
            v = np.arange(q, dtype=np.int64)
            for i in range(k):
                digits[:, i] = v % p
                v //= p
            self.ndig = digits
            self.npow = p ** np.arange(k, dtype=np.int64)
            # quadratic character and least square roots
            allv = np.arange(q, dtype=np.int64)
            sq = self.mul_vec(allv, allv)
            chi = np.full(q, -1, dtype=np.int8)
            chi[sq] = 1
            chi[0] = 0
            self.nchi = chi
            self.chi = chi.tolist()
            roots = np.full(q, q, dtype=np.int64)
            np.minimum.at(roots, sq, allv)
            roots[roots == q] = -1  # non-squares, never read behind the chi test
            self.nsqrt = roots
            self.sqrt = roots.tolist()
            self.four = 4 % p
            self.inv2 = self.sinv(2 % p)

    def _const(self, c: int) -> int:
        # integer constants pack into the degree-0 digit
        return c % self.p

    # -- vector field ops ---------------------------------------------------

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        out = np.zeros(len(a), dtype=np.int64)
        mask = (a != 0) & (b != 0)
        out[mask] = self.nexp[self.nlog[a[mask]] + self.nlog[b[mask]]]
        return out

    def mulc_vec(self, c: int, a: np.ndarray) -> np.ndarray:
        if c == 0:
            return np.zeros(len(a), dtype=np.int64)
        out = np.zeros(len(a), dtype=np.int64)
        mask = a != 0
        out[mask] = self.nexp[self.nlog[a[mask]] + self.log[c]]
        return out

    def add_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p == 2:
            return a ^ b
        d = (self.ndig[a] + self.ndig[b]) % self.p
        return d @ self.npow

    def addc_vec(self, a: np.ndarray, c: int) -> np.ndarray:
        if self.p == 2:
            return a ^ c
        if c == 0:
            return a
        d = (self.ndig[a] + self.ndig[c]) % self.p
        return d @ self.npow

    # -- scalar field ops (packed ints) -------------------------------------

    def smul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def sinv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("packed inverse of zero")
        return self.exp[(self.qm1 - self.log[a]) % self.qm1]

    def sadd(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        out = 0
        mul = 1
        while a or b:
            out += (a % p + b % p) % p * mul
            a //= p
            b //= p
            mul *= p
        return out

    def sneg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out = 0
        mul = 1
        while a:
            out += (-a) % p * mul
            a //= p
            mul *= p
        return out

    def ssub(self, a: int, b: int) -> int:
        return self.sadd(a, self.sneg(b))


def _reduction_rows(p: int, k: int, modulus) -> list[list[int]]:
    rows = []
    cur = [(-c) % p for c in modulus[:-1]]
    rows.append(cur[:])
    for _ in range(k - 2):
        cur = [0] + cur
        lead = cur.pop()
        if lead:
            cur = [(ci + lead * ri) % p for ci, ri in zip(cur, rows[0])]
        rows.append(cur[:])
    return rows


def _packed_mul(a: int, b: int, p: int, k: int, red_rows) -> int:
    if a == 0 or b == 0:
        return 0
    da = []
    while a:
        da.append(a % p)
        a //= p
    db = []
    while b:
        db.append(b % p)
        b //= p
    prod = [0] * (len(da) + len(db) - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
    out = prod[:k] + [0] * max(0, k - len(prod))
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            row = red_rows[i - k]
            for j in range(k):
                out[j] = (out[j] + c * row[j]) % p
    idx = 0
    for c in reversed(out):
        idx = idx * p + c
    return idx


def make_ctx(seed: dict) -> Ctx:
    return Ctx(seed)


# ---------------------------------------------------------------------------
# point counting (vectorized)


def point_count(ctx: Ctx, coeffs) -> int:
    a1, a2, a3, a4, a6 = coeffs
    q = ctx.q
    x = np.arange(q, dtype=np.int64)
    b = ctx.addc_vec(ctx.mulc_vec(a1, x), a3)
    f = ctx.addc_vec(ctx.mul_vec(ctx.addc_vec(x, a2), x), a4)
    f = ctx.addc_vec(ctx.mul_vec(f, x), a6)
    if ctx.p == 2:
        mask = b != 0
        # z^2 + z = f / b^2 has 2 roots iff the absolute trace vanishes
        logb = ctx.nlog[b[mask]]
        fm = f[mask]
        d = np.zeros(len(fm), dtype=np.int64)
        fmask = fm != 0
        d[fmask] = ctx.nexp[
            (ctx.nlog[fm[fmask]] + 2 * (ctx.qm1 - logb[fmask])) % ctx.qm1
        ]
        two_sol = int((ctx.ntrace[d] == 0).sum())
        return 1 + int((~mask).sum()) + 2 * two_sol
    d = ctx.add_vec(ctx.mul_vec(b, b), ctx.mulc_vec(ctx.four, f))
    return 1 + q + int(ctx.nchi[d].sum())


def point_count_many(ctx: Ctx, coeff_rows) -> list[int]:
    return [point_count(ctx, tuple(row)) for row in coeff_rows]


# ---------------------------------------------------------------------------
# scalar point arithmetic on packed coordinates


def _y_roots(ctx: Ctx, coeffs, x: int) -> list[int]:
    """Packed y solving the curve equation at x, ascending (0, 1 or 2)."""
    a1, a2, a3, a4, a6 = coeffs
    b = ctx.sadd(ctx.smul(a1, x), a3)
    f = ctx.sadd(ctx.smul(ctx.sadd(ctx.smul(ctx.sadd(x, a2), x), a4), x), a6)
    if ctx.p == 2:
        if b == 0:
            # squaring is bijective: unique root f^(q/2)
            if f == 0:
                return [0]
            return [ctx.exp[(ctx.log[f] << (ctx.k - 1)) % ctx.qm1]]
        binv2 = ctx.exp[(2 * (ctx.qm1 - ctx.log[b])) % ctx.qm1]
        d = ctx.smul(f, binv2)
        v = d
        pre = 0
        for pb, pi, pp in ctx.as_pivots:
            if v >> pb & 1:
                v ^= pi
                pre ^= pp
        if v:
            return []
        return sorted((ctx.smul(b, pre), ctx.smul(b, pre ^ 1)))
    d = ctx.sadd(ctx.smul(b, b), ctx.smul(ctx.four, f))
    chi = ctx.chi[d]
    if chi == -1:
        return []
    nb = ctx.sneg(b)
    if chi == 0:
        return [ctx.smul(nb, ctx.inv2)]
    s = ctx.sqrt[d]
    return sorted(
        (
            ctx.smul(ctx.sadd(nb, s), ctx.inv2),
            ctx.smul(ctx.sadd(nb, ctx.sneg(s)), ctx.inv2),
        )
    )


def _pneg(ctx, coeffs, pt):
    if pt is _INF:
        return pt
    a1, _, a3, _, _ = coeffs
    x, y = pt
    return (x, ctx.sneg(ctx.sadd(ctx.sadd(y, ctx.smul(a1, x)), a3)))


def _padd(ctx: Ctx, coeffs, p1, p2):
    if p1 is _INF:
        return p2
    if p2 is _INF:
        return p1
    a1, a2, a3, a4, _ = coeffs
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if y2 == ctx.sneg(ctx.sadd(ctx.sadd(y1, ctx.smul(a1, x1)), a3)):
            return _INF
        denom = ctx.sadd(ctx.sadd(y1, y1), ctx.sadd(ctx.smul(a1, x1), a3))
        num = ctx.ssub(
            ctx.sadd(
                ctx.smul(ctx._const(3), ctx.smul(x1, x1)),
                ctx.sadd(ctx.smul(ctx._const(2), ctx.smul(a2, x1)), a4),
            ),
            ctx.smul(a1, y1),
        )
        lam = ctx.smul(num, ctx.sinv(denom))
    else:
        lam = ctx.smul(ctx.ssub(y2, y1), ctx.sinv(ctx.ssub(x2, x1)))
    nu = ctx.ssub(y1, ctx.smul(lam, x1))
    x3 = ctx.ssub(
        ctx.ssub(ctx.ssub(ctx.sadd(ctx.smul(lam, lam), ctx.smul(a1, lam)), a2), x1), x2
    )
    y3 = ctx.ssub(ctx.ssub(ctx.sneg(ctx.smul(ctx.sadd(lam, a1), x3)), nu), a3)
    return (x3, y3)


def _pmul(ctx, coeffs, k: int, pt):
    result = _INF
    base = pt
    while k:
        if k & 1:
            result = _padd(ctx, coeffs, result, base)
        base = _padd(ctx, coeffs, base, base)
        k >>= 1
    return result


def _point_order(ctx, coeffs, pt, n: int, fac_primes) -> int:
    o = n
    for p, e in fac_primes:
        o //= p**e
        t = _pmul(ctx, coeffs, o, pt)
        while t is not _INF:
            t = _pmul(ctx, coeffs, p, t)
            o *= p
    return o


# ---------------------------------------------------------------------------
# group structure primitives


def torsion_count(ctx: Ctx, coeffs, m: int) -> int:
    count = 1
    for x in range(ctx.q):
        ys = _y_roots(ctx, coeffs, x)
        if not ys:
            continue
        if _pmul(ctx, coeffs, m, (x, ys[0])) is _INF:
            count += len(ys)
    return count


def order_scan(ctx: Ctx, coeffs, n: int, fac_primes, candidates, budget: int):
    targets = {}
    for ell in candidates:
        v = 0
        m = n
        while m % ell == 0:
            m //= ell
            v += 1
        targets[ell] = v

    def resolved(lcm_val: int) -> bool:
        for ell, v in targets.items():
            m = lcm_val
            w = 0
            while m % ell == 0:
                m //= ell
                w += 1
            if w < v:
                return False
        return True

    found = 1
    scanned = 0
    for x in range(ctx.q):
        ys = _y_roots(ctx, coeffs, x)
        if not ys:
            continue
        o = _point_order(ctx, coeffs, (x, ys[0]), n, fac_primes)
        found = math.lcm(found, o)
        scanned += 1
        if found == n:
            return found, True
        if resolved(found):
            return found, False
        if scanned >= budget:
            return found, False
    return found, True


def brute_structure(ctx: Ctx, coeffs, fac_primes) -> tuple[int, int]:
    count = 1
    exponent = 1
    n = 1
    for p, e in fac_primes:
        n *= p**e
    for x in range(ctx.q):
        for y in _y_roots(ctx, coeffs, x):
            count += 1
            o = _point_order(ctx, coeffs, (x, y), n, fac_primes)
            exponent = math.lcm(exponent, o)
    return count, exponent
