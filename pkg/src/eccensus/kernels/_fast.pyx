# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: tight C loops over packed field elements.

Same primitives and bit-identical outputs as ``pyback``; tables are built
from the shared field seed (same modulus, same generator), so scan orders
match exactly.
"""

import math

import numpy as np


cdef class Ctx:
    cdef public long long p, k, q, qm1
    cdef long long[::1] exp
    cdef long long[::1] log
    cdef unsigned char[::1] trace      # p == 2
    cdef long long[::1] as_pivot_bits  # p == 2: (bit, image, preimage) triples
    cdef long long n_pivots
    cdef signed char[::1] chi          # odd p
    cdef long long[::1] sqrt_tab       # odd p
    cdef long long four, inv2

    def __init__(self, seed):
        cdef long long p = seed["p"]
        cdef long long k = seed["k"]
        cdef long long q = seed["q"]
        cdef long long qm1 = q - 1
        cdef long long i, j, s, gen, curp
        cdef long long[:, ::1] redv
        cdef long long[::1] expv, logv, sqv, flatv
        cdef signed char[::1] chiv
        cdef unsigned char[::1] trv

        self.p = p
        self.k = k
        self.q = q
        self.qm1 = qm1

        modulus = seed["modulus"]
        red = []
        cur = [(-int(m)) % p for m in modulus[:k]]
        red.append(cur[:])
        for i in range(k - 2):
            cur = [0] + cur
            lead = cur.pop()
            if lead:
                cur = [(ci + lead * ri) % p for ci, ri in zip(cur, red[0])]
            red.append(cur[:])
        red_arr = np.zeros((max(k - 1, 1), k), dtype=np.int64)
        for i in range(len(red)):
            for j in range(k):
                red_arr[i, j] = red[i][j]
        redv = red_arr

        exp_arr = np.zeros(2 * qm1, dtype=np.int64)
        log_arr = np.zeros(q, dtype=np.int64)
        expv = exp_arr
        logv = log_arr
        gen = seed["gen"]
        curp = 1
        for i in range(qm1):
            expv[i] = curp
            expv[i + qm1] = curp
            logv[curp] = i
            curp = _raw_mul(curp, gen, p, k, redv)
        self.exp = expv
        self.log = logv

        self.n_pivots = 0
        self.four = 0
        self.inv2 = 0
        if p == 2:
            tmask = seed["trace_mask"]
            idx = np.arange(q, dtype=np.uint64)
            tr_arr = (np.bitwise_count(idx & np.uint64(tmask)) & 1).astype(np.uint8)
            trv = tr_arr
            self.trace = trv
            piv = seed["as_pivots"]
            self.n_pivots = len(piv)
            flat_arr = np.zeros(3 * max(len(piv), 1), dtype=np.int64)
            for i in range(len(piv)):
                flat_arr[3 * i] = piv[i][0]
                flat_arr[3 * i + 1] = piv[i][1]
                flat_arr[3 * i + 2] = piv[i][2]
            flatv = flat_arr
            self.as_pivot_bits = flatv
        else:
            chi_arr = np.full(q, -1, dtype=np.int8)
            sq_arr = np.full(q, q, dtype=np.int64)
            chiv = chi_arr
            sqv = sq_arr
            for i in range(q):
                s = self.c_mul(i, i)
                chiv[s] = 1
                if i < sqv[s]:
                    sqv[s] = i
            chiv[0] = 0
            for i in range(q):
                if sqv[i] == q:
                    sqv[i] = -1
            self.chi = chiv
            self.sqrt_tab = sqv
            self.four = 4 % p
            self.inv2 = self.c_inv(2 % p)

    cdef inline long long c_mul(self, long long a, long long b) noexcept nogil:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    cdef inline long long c_inv(self, long long a) noexcept nogil:
        return self.exp[(self.qm1 - self.log[a]) % self.qm1]

    cdef inline long long c_add(self, long long a, long long b) noexcept nogil:
        cdef long long p = self.p
        cdef long long out, mul
        if p == 2:
            return a ^ b
        out = 0
        mul = 1
        while a or b:
            out += ((a % p) + (b % p)) % p * mul
            a = a // p
            b = b // p
            mul *= p
        return out

    cdef inline long long c_neg(self, long long a) noexcept nogil:
        cdef long long p = self.p
        cdef long long out, mul
        if p == 2:
            return a
        out = 0
        mul = 1
        while a:
            out += (p - a % p) % p * mul
            a = a // p
            mul *= p
        return out

    cdef inline long long c_sub(self, long long a, long long b) noexcept nogil:
        return self.c_add(a, self.c_neg(b))


cdef long long _raw_mul(long long a, long long b, long long p, long long k,
                        long long[:, ::1] red) noexcept nogil:
    # packed digit multiplication, used only while bootstrapping the tables
    cdef long long da[64]
    cdef long long db[64]
    cdef long long prod[128]
    cdef long long i, j, c, idx
    if a == 0 or b == 0:
        return 0
    for i in range(k):
        da[i] = a % p
        a //= p
        db[i] = b % p
        b //= p
    for i in range(2 * k):
        prod[i] = 0
    for i in range(k):
        if da[i]:
            for j in range(k):
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p
    # red[m] is the full degree-< k reduction of x^(k+m)
    for i in range(2 * k - 2, k - 1, -1):
        c = prod[i]
        if c:
            for j in range(k):
                prod[j] = (prod[j] + c * red[i - k, j]) % p
    idx = 0
    for i in range(k - 1, -1, -1):
        idx = idx * p + prod[i]
    return idx


def make_ctx(seed):
    return Ctx(seed)


# ---------------------------------------------------------------------------
# point counting


cdef long long _count(Ctx ctx, long long a1, long long a2, long long a3,
                      long long a4, long long a6) noexcept nogil:
    cdef long long q = ctx.q, qm1 = ctx.qm1
    cdef long long x, b, f, d, n
    n = 1
    if ctx.p == 2:
        for x in range(q):
            b = ctx.c_add(ctx.c_mul(a1, x), a3)
            f = ctx.c_add(ctx.c_mul(ctx.c_add(ctx.c_mul(ctx.c_add(x, a2), x), a4), x), a6)
            if b == 0:
                n += 1
            else:
                if f == 0:
                    d = 0
                else:
                    d = ctx.exp[(ctx.log[f] + 2 * (qm1 - ctx.log[b])) % qm1]
                if ctx.trace[d] == 0:
                    n += 2
    else:
        for x in range(q):
            b = ctx.c_add(ctx.c_mul(a1, x), a3)
            f = ctx.c_add(ctx.c_mul(ctx.c_add(ctx.c_mul(ctx.c_add(x, a2), x), a4), x), a6)
            d = ctx.c_add(ctx.c_mul(b, b), ctx.c_mul(ctx.four, f))
            n += 1 + ctx.chi[d]
    return n


def point_count(Ctx ctx, coeffs):
    cdef long long a1 = coeffs[0], a2 = coeffs[1], a3 = coeffs[2]
    cdef long long a4 = coeffs[3], a6 = coeffs[4]
    cdef long long n
    with nogil:
        n = _count(ctx, a1, a2, a3, a4, a6)
    return n


def point_count_many(Ctx ctx, coeff_rows):
    rows = np.ascontiguousarray(np.asarray(coeff_rows, dtype=np.int64))
    cdef long long[:, ::1] rv = rows
    cdef long long m = rv.shape[0]
    out = np.zeros(m, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef long long i
    with nogil:
        for i in range(m):
            ov[i] = _count(ctx, rv[i, 0], rv[i, 1], rv[i, 2], rv[i, 3], rv[i, 4])
    return out.tolist()


# ---------------------------------------------------------------------------
# scalar point arithmetic (x = -1 encodes infinity)


cdef int _y_roots(Ctx ctx, long long a1, long long a2, long long a3,
                  long long a4, long long a6, long long x,
                  long long *y0, long long *y1) noexcept nogil:
    cdef long long b = ctx.c_add(ctx.c_mul(a1, x), a3)
    cdef long long f = ctx.c_add(ctx.c_mul(ctx.c_add(ctx.c_mul(ctx.c_add(x, a2), x), a4), x), a6)
    cdef long long d, v, pre, i, s, nb, r0, r1
    if ctx.p == 2:
        if b == 0:
            if f == 0:
                y0[0] = 0
            else:
                y0[0] = ctx.exp[(ctx.log[f] << (ctx.k - 1)) % ctx.qm1]
            return 1
        if f == 0:
            d = 0
        else:
            d = ctx.exp[(ctx.log[f] + 2 * (ctx.qm1 - ctx.log[b])) % ctx.qm1]
        if ctx.trace[d]:
            return 0
        v = d
        pre = 0
        for i in range(ctx.n_pivots):
            if (v >> ctx.as_pivot_bits[3 * i]) & 1:
                v ^= ctx.as_pivot_bits[3 * i + 1]
                pre ^= ctx.as_pivot_bits[3 * i + 2]
        r0 = ctx.c_mul(b, pre)
        r1 = ctx.c_mul(b, pre ^ 1)
        if r0 > r1:
            r0, r1 = r1, r0
        y0[0] = r0
        y1[0] = r1
        return 2
    d = ctx.c_add(ctx.c_mul(b, b), ctx.c_mul(ctx.four, f))
    if ctx.chi[d] == -1:
        return 0
    nb = ctx.c_neg(b)
    if ctx.chi[d] == 0:
        y0[0] = ctx.c_mul(nb, ctx.inv2)
        return 1
    s = ctx.sqrt_tab[d]
    r0 = ctx.c_mul(ctx.c_add(nb, s), ctx.inv2)
    r1 = ctx.c_mul(ctx.c_add(nb, ctx.c_neg(s)), ctx.inv2)
    if r0 > r1:
        r0, r1 = r1, r0
    y0[0] = r0
    y1[0] = r1
    return 2


cdef void _padd(Ctx ctx, long long a1, long long a2, long long a3, long long a4,
                long long x1, long long y1, long long x2, long long y2,
                long long *x3, long long *y3) noexcept nogil:
    cdef long long lam, nu, denom, num, xr, yr
    if x1 == -1:
        x3[0] = x2
        y3[0] = y2
        return
    if x2 == -1:
        x3[0] = x1
        y3[0] = y1
        return
    if x1 == x2:
        if y2 == ctx.c_neg(ctx.c_add(ctx.c_add(y1, ctx.c_mul(a1, x1)), a3)):
            x3[0] = -1
            y3[0] = 0
            return
        denom = ctx.c_add(ctx.c_add(y1, y1), ctx.c_add(ctx.c_mul(a1, x1), a3))
        num = ctx.c_sub(
            ctx.c_add(
                ctx.c_mul(3 % ctx.p, ctx.c_mul(x1, x1)),
                ctx.c_add(ctx.c_mul(2 % ctx.p, ctx.c_mul(a2, x1)), a4),
            ),
            ctx.c_mul(a1, y1),
        )
        lam = ctx.c_mul(num, ctx.c_inv(denom))
    else:
        lam = ctx.c_mul(ctx.c_sub(y2, y1), ctx.c_inv(ctx.c_sub(x2, x1)))
    nu = ctx.c_sub(y1, ctx.c_mul(lam, x1))
    xr = ctx.c_sub(ctx.c_sub(ctx.c_sub(ctx.c_add(ctx.c_mul(lam, lam), ctx.c_mul(a1, lam)), a2), x1), x2)
    yr = ctx.c_sub(ctx.c_sub(ctx.c_neg(ctx.c_mul(ctx.c_add(lam, a1), xr)), nu), a3)
    x3[0] = xr
    y3[0] = yr


cdef void _pmul(Ctx ctx, long long a1, long long a2, long long a3, long long a4,
                long long k, long long px, long long py,
                long long *rx, long long *ry) noexcept nogil:
    cdef long long ax = -1, ay = 0
    cdef long long bx = px, by = py
    cdef long long tx, ty
    while k:
        if k & 1:
            _padd(ctx, a1, a2, a3, a4, ax, ay, bx, by, &tx, &ty)
            ax = tx
            ay = ty
        _padd(ctx, a1, a2, a3, a4, bx, by, bx, by, &tx, &ty)
        bx = tx
        by = ty
        k >>= 1
    rx[0] = ax
    ry[0] = ay


cdef long long _gcd_ll(long long a, long long b) noexcept nogil:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef long long _order(Ctx ctx, long long a1, long long a2, long long a3,
                      long long a4, long long px, long long py, long long n,
                      long long[::1] fprimes, long long[::1] fexps,
                      long long nfac) noexcept nogil:
    cdef long long o = n, i, e, tx, ty, prime
    for i in range(nfac):
        prime = fprimes[i]
        for e in range(fexps[i]):
            o //= prime
        _pmul(ctx, a1, a2, a3, a4, o, px, py, &tx, &ty)
        while tx != -1:
            _pmul(ctx, a1, a2, a3, a4, prime, tx, ty, &tx, &ty)
            o *= prime
    return o


# ---------------------------------------------------------------------------
# group structure primitives


def torsion_count(Ctx ctx, coeffs, long long m):
    cdef long long a1 = coeffs[0], a2 = coeffs[1], a3 = coeffs[2]
    cdef long long a4 = coeffs[3], a6 = coeffs[4]
    cdef long long x, y0, y1, tx, ty
    cdef long long count = 1
    cdef int nr
    with nogil:
        for x in range(ctx.q):
            nr = _y_roots(ctx, a1, a2, a3, a4, a6, x, &y0, &y1)
            if nr == 0:
                continue
            _pmul(ctx, a1, a2, a3, a4, m, x, y0, &tx, &ty)
            if tx == -1:
                count += nr
    return count


def order_scan(Ctx ctx, coeffs, long long n, fac_primes, candidates, long long budget):
    cdef long long a1 = coeffs[0], a2 = coeffs[1], a3 = coeffs[2]
    cdef long long a4 = coeffs[3], a6 = coeffs[4]
    cdef long long nf = len(fac_primes)
    fp = np.array([f[0] for f in fac_primes], dtype=np.int64)
    fe = np.array([f[1] for f in fac_primes], dtype=np.int64)
    cdef long long[::1] fpv = fp
    cdef long long[::1] fev = fe
    cdef long long nc = len(candidates)
    cand = np.array(list(candidates) or [0], dtype=np.int64)
    targ = np.zeros(max(nc, 1), dtype=np.int64)
    cdef long long[::1] candv = cand
    cdef long long[::1] targv = targ
    cdef long long i, m, x, y0, y1, o, w
    for i in range(nc):
        m = n
        while m % candv[i] == 0:
            m //= candv[i]
            targv[i] += 1
    cdef long long found = 1
    cdef long long scanned = 0
    cdef int nr
    cdef bint all_resolved
    cdef bint exhausted = True
    cdef bint hit_n = False
    with nogil:
        for x in range(ctx.q):
            nr = _y_roots(ctx, a1, a2, a3, a4, a6, x, &y0, &y1)
            if nr == 0:
                continue
            o = _order(ctx, a1, a2, a3, a4, x, y0, n, fpv, fev, nf)
            found = found * (o // _gcd_ll(found, o))
            scanned += 1
            if found == n:
                hit_n = True
                break
            all_resolved = True
            for i in range(nc):
                m = found
                w = 0
                while m % candv[i] == 0:
                    m //= candv[i]
                    w += 1
                if w < targv[i]:
                    all_resolved = False
                    break
            if all_resolved or scanned >= budget:
                exhausted = False
                break
    if hit_n:
        return found, True
    return found, exhausted


def brute_structure(Ctx ctx, coeffs, fac_primes):
    cdef long long a1 = coeffs[0], a2 = coeffs[1], a3 = coeffs[2]
    cdef long long a4 = coeffs[3], a6 = coeffs[4]
    cdef long long nf = len(fac_primes)
    fp = np.array([f[0] for f in fac_primes] or [1], dtype=np.int64)
    fe = np.array([f[1] for f in fac_primes] or [0], dtype=np.int64)
    cdef long long[::1] fpv = fp
    cdef long long[::1] fev = fe
    cdef long long n = 1
    cdef long long i, e
    for i in range(nf):
        for e in range(fev[i]):
            n *= fpv[i]
    cdef long long x, y0, y1, o
    cdef long long count = 1, exponent = 1
    cdef int nr
    with nogil:
        for x in range(ctx.q):
            nr = _y_roots(ctx, a1, a2, a3, a4, a6, x, &y0, &y1)
            if nr >= 1:
                count += 1
                o = _order(ctx, a1, a2, a3, a4, x, y0, n, fpv, fev, nf)
                exponent = exponent * (o // _gcd_ll(exponent, o))
            if nr == 2:
                count += 1
                o = _order(ctx, a1, a2, a3, a4, x, y1, n, fpv, fev, nf)
                exponent = exponent * (o // _gcd_ll(exponent, o))
    return count, exponent


# ---------------------------------------------------------------------------
# primitive accessors used by cross-backend equivalence tests


def debug_mul(Ctx ctx, long long a, long long b):
    return ctx.c_mul(a, b)


def debug_add(Ctx ctx, long long a, long long b):
    return ctx.c_add(a, b)


def debug_exp_entry(Ctx ctx, long long i):
    return ctx.exp[i]


def debug_y_roots(Ctx ctx, coeffs, long long x):
    cdef long long y0 = 0, y1 = 0
    cdef int nr = _y_roots(ctx, coeffs[0], coeffs[1], coeffs[2], coeffs[3],
                           coeffs[4], x, &y0, &y1)
    if nr == 0:
        return []
    if nr == 1:
        return [y0]
    return [y0, y1]
