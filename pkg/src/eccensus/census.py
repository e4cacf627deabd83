"""Empirical censuses.

Two kinds of counts are produced: fiber censuses over a family of curves
indexed by the elements a of F_{q^n} (with explicit replacement curves at
the finitely many bad parameters), and place censuses of the elementary
divisor d_nu over the degree-n places of F_q(t).

The family census over F_2 runs through a Walsh-Hadamard transform: for a
family varying only in a6, the per-fiber point count is an affine trace
correlation, so all 2^n counts drop out of one O(n 2^n) butterfly.  Place
censuses enumerate Frobenius orbits of the canonical field F_{q^n}, so the
residue fields never have to be rebuilt per place.  Everything downstream
of the counts (divisor resolution) goes through the kernels backend.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import arith, ec, funcfield, gf, kernels
from .errors import EccensusError, TooLarge

_CAP = 1 << 24


@dataclass
class CensusReport:
    """Tallies of the elementary divisor d over fibers or places.

    For family censuses every parameter is counted (replacement fibers
    included) and bad_count is 0; for place censuses bad_count is the
    number of skipped places (coefficient pole or vanishing discriminant),
    which lie outside the census by definition.
    """

    n: int
    counts: dict[int, int]
    bad_count: int
    total: int
    replaced_total: int = 0
    replaced_cyclic: int = 0
    label: str = ""

    @property
    def cyclic_count(self) -> int:
        return self.counts.get(1, 0)

    def validate(self):
        if sum(self.counts.values()) + self.bad_count != self.total:
            raise AssertionError("census tallies do not add up")


@dataclass(frozen=True)
class FiberFamily:
    """Curves indexed by field elements: generic coefficient functions plus
    replacement curve specs at the bad parameters (pole or disc = 0)."""

    field: gf.FiniteField
    coeffs: tuple  # five RationalFunctions (a1, a2, a3, a4, a6)
    replacements: tuple  # ((locus Poly, five RationalFunctions), ...)
    label: str = ""

    @property
    def q(self) -> int:
        return self.field.order

    def generic_curve(self) -> ec.WeierstrassCurve:
        return ec.WeierstrassCurve(*self.coeffs)

    def fiber(self, a: gf.FieldElement) -> tuple[ec.WeierstrassCurve, bool]:
        """(curve at parameter a, replaced flag)."""
        vals = [_rf_value(c, a) for c in self.coeffs]
        if all(v is not None for v in vals):
            cur = ec.WeierstrassCurve(*vals)
            if cur.discriminant():
                return cur, False
        for locus, repl in self.replacements:
            if not locus.evaluate(a):
                rvals = [_rf_value(c, a) for c in repl]
                if any(v is None for v in rvals):
                    raise EccensusError("replacement curve has a pole")
                cur = ec.WeierstrassCurve(*rvals)
                if not cur.discriminant():
                    raise EccensusError("replacement curve is singular")
                return cur, True
        raise EccensusError(f"family {self.label!r} undefined at {a!r}")


def _rf_value(f: funcfield.RationalFunction, a: gf.FieldElement):
    den = f.den.evaluate(a)
    if not den:
        return None
    return f.num.evaluate(a) / den


def specialization_family(
    curve: ec.WeierstrassCurve, replacements, label: str = ""
) -> FiberFamily:
    """The family a -> curve(t = a) with the given replacement specs."""
    coeffs = curve.coefficients()
    base = coeffs[0].field
    return FiberFamily(base, tuple(coeffs), tuple(replacements), label)


def paper_family() -> FiberFamily:
    """Over F_2: a -> [y^2 + xy = x^3 + a], with [y^2 + y = x^3] at a = 0."""
    f2 = gf.field_create(2, 1)
    t = funcfield.RationalFunction.variable(f2)
    const = lambda c: funcfield.RationalFunction.constant(f2, c)
    coeffs = (const(1), const(0), const(0), const(0), t)
    repl = (const(0), const(0), const(1), const(0), const(0))
    locus = funcfield.Poly(f2, [0, 1])
    return FiberFamily(f2, coeffs, ((locus, repl),), "a6-family over F_2")


def standard_family(q: int) -> FiberFamily:
    """A non-isotrivial test family per base field, with replacements."""
    if q == 2:
        return paper_family()
    fq = gf.field_create(q, 1)
    t = funcfield.RationalFunction.variable(fq)
    const = lambda c: funcfield.RationalFunction.constant(fq, c)
    if q == 3:
        # y^2 = x^3 + x^2 + t, bad only at t = 0; replace by y^2 = x^3 - x
        coeffs = (const(0), const(1), const(0), const(0), t)
        repl = (const(0), const(0), const(0), const(-1), const(0))
    elif q == 5:
        # y^2 = x^3 + p(t) x + q(t); replace bad fibers by y^2 = x^3 - 1
        pt = funcfield.RationalFunction(funcfield.parse_poly("t^3 - t^2 + 2*t", fq))
        qt = funcfield.RationalFunction(
            funcfield.parse_poly("2*t^6 + t^5 + t - 1", fq)
        )
        coeffs = (const(0), const(0), const(0), pt, qt)
        repl = (const(0), const(0), const(0), const(0), const(-1))
    else:
        raise ValueError(f"no standard family for q = {q}")
    curve = ec.WeierstrassCurve(*coeffs)
    disc = curve.discriminant()
    locus = disc.num.monic()
    return FiberFamily(fq, coeffs, ((locus, repl),), f"standard family over F_{q}")


def curve_of_family(family: FiberFamily) -> ec.WeierstrassCurve:
    return family.generic_curve()


# ---------------------------------------------------------------------------
# family census


def family_census(family: FiberFamily, n: int, workers: int = 1) -> CensusReport:
    """Count d over all fibers a in F_{q^n}; f(n) is the cyclic count."""
    base = family.field
    if base.order**n > _CAP:
        raise TooLarge(f"family census needs q^n <= 2^24, got {base.order}^{n}")
    big = gf.field_create(base.p, base.k * n)
    q_big = big.order

    rows = np.zeros((q_big, 5), dtype=np.int64)
    replaced = np.zeros(q_big, dtype=bool)
    wht_counts = _wht_family_counts(family, big)
    if wht_counts is not None:
        n_arr = wht_counts
        # only the bad fibers need individual handling
        disc_fn = family.generic_curve().discriminant()
        for idx in range(q_big):
            a = big.from_index(idx)
            den = disc_fn.den.evaluate(a)
            if den and disc_fn.num.evaluate(a) / den:
                continue
            curve, was_replaced = family.fiber(a)
            rows[idx] = [c.pack() for c in curve.coefficients()]
            replaced[idx] = was_replaced
            n_arr[idx] = kernels.point_count(big, tuple(int(v) for v in rows[idx]))
        # generic fibers share the family coefficient shape
        c1, c2, c3, c4 = (_constant_pack(c, big) for c in family.coeffs[:4])
        gen_mask = ~replaced
        idxs = np.arange(q_big)[gen_mask]
        rows[gen_mask, 0] = c1
        rows[gen_mask, 1] = c2
        rows[gen_mask, 2] = c3
        rows[gen_mask, 3] = c4
        rows[gen_mask, 4] = _a6_values(family, big)[gen_mask]
    elif base.k == 1:
        # vectorized coefficient evaluation over all parameters at once
        ctx = kernels.vector_tables(big)
        a_vec = np.arange(q_big, dtype=np.int64)
        bad = np.zeros(q_big, dtype=bool)
        cols = []
        for c in family.coeffs:
            den = _eval_poly_vec(ctx, c.den, a_vec)
            bad |= den == 0
            cols.append((_eval_poly_vec(ctx, c.num, a_vec), den))
        disc_fn = family.generic_curve().discriminant()
        bad |= _eval_poly_vec(ctx, disc_fn.num, a_vec) == 0
        good = ~bad
        for i, (num, den) in enumerate(cols):
            vals = np.zeros(q_big, dtype=np.int64)
            nz = good & (num != 0)
            vals[nz] = ctx.nexp[
                (ctx.nlog[num[nz]] + ctx.qm1 - ctx.nlog[den[nz]]) % ctx.qm1
            ]
            rows[good, i] = vals[good]
        for idx in np.nonzero(bad)[0]:
            a = big.from_index(int(idx))
            curve, was_replaced = family.fiber(a)
            rows[idx] = [c.pack() for c in curve.coefficients()]
            replaced[idx] = was_replaced
        n_arr = np.array(kernels.point_count_many(big, rows), dtype=np.int64)
    else:
        for idx in range(q_big):
            a = big.from_index(idx)
            curve, was_replaced = family.fiber(a)
            rows[idx] = [c.pack() for c in curve.coefficients()]
            replaced[idx] = was_replaced
        n_arr = np.array(
            kernels.point_count_many(big, rows), dtype=np.int64
        )

    _assert_hasse_vec(n_arr, q_big)
    counts, repl_cyc = _classify_fibers(big, rows, n_arr, replaced, workers)
    report = CensusReport(
        n=n,
        counts=counts,
        bad_count=0,
        total=q_big,
        replaced_total=int(replaced.sum()),
        replaced_cyclic=repl_cyc,
        label=family.label,
    )
    report.validate()
    return report


def _eval_poly_vec(ctx, poly: funcfield.Poly, a_vec: np.ndarray) -> np.ndarray:
    """Horner evaluation of a prime-field polynomial at packed parameters."""
    acc = np.zeros(len(a_vec), dtype=np.int64)
    for c in reversed(poly.coeffs):
        acc = ctx.addc_vec(ctx.mul_vec(acc, a_vec), c.coords[0])
    return acc


def _constant_pack(rf: funcfield.RationalFunction, big: gf.FiniteField) -> int:
    c = rf.constant_value()
    if c.field.k == 1:
        return c.coords[0]
    return gf.embed(c, big).pack()


def _a6_values(family: FiberFamily, big: gf.FiniteField) -> np.ndarray:
    # fast path only: p = 2 and a6 = t + constant, so a6(a) = a xor shift
    a6 = family.coeffs[4].num
    shift = a6.coeffs[0].coords[0] if a6.degree >= 1 and a6.coeffs[0] else 0
    return np.arange(big.order, dtype=np.int64) ^ shift


def _wht_family_counts(family: FiberFamily, big: gf.FiniteField):
    """Batch point counts for a char-2 family varying only in a6.

    N(a) = Q + 1 + sum over x != x0 of (-1)^tr(h + a w) with w = B^-2 a
    bijection of x, so the counts are the Walsh spectrum of the sign table
    of h pulled back along w.  Returns None when the family shape does not
    apply.
    """
    if family.field.order != 2 or big.p != 2:
        return None
    a1, a2, a3, a4, a6 = family.coeffs
    for c in (a1, a2, a3, a4):
        if not c.is_constant():
            return None
    if a1.constant_value().pack() != 1:
        return None
    if a6.den.degree != 0 or a6.num.degree != 1 or a6.num.coeffs[1].pack() != 1:
        return None
    ctx = kernels.vector_tables(big)
    q = big.order
    kbits = big.k
    c2, c3, c4 = (c.constant_value().pack() for c in (a2, a3, a4))
    c6 = a6.num.coeffs[0].pack()
    x = np.arange(q, dtype=np.int64)
    b = x ^ c3  # a1 = 1
    sel = b != 0
    xs = x[sel]
    bs = b[sel]
    w = ctx.nexp[(2 * (ctx.qm1 - ctx.nlog[bs])) % ctx.qm1]
    f0 = ctx.mul_vec(ctx.addc_vec(ctx.mul_vec(ctx.addc_vec(xs, c2), xs), c4), xs) ^ c6
    h = ctx.mul_vec(f0, w)
    sign = (1 - 2 * ctx.ntrace[h].astype(np.int64)).astype(np.int64)
    # relabel w by the trace bilinear form so tr(a*w) becomes a dot product
    cols = np.zeros(kbits, dtype=np.int64)
    for j in range(kbits):
        bj = big.from_index(1 << j)
        col = 0
        for i in range(kbits):
            bi = big.from_index(1 << i)
            if big.absolute_trace(bi * bj):
                col |= 1 << i
        cols[j] = col
    mu = np.zeros(len(w), dtype=np.int64)
    for j in range(kbits):
        mu ^= ((w >> j) & 1) * cols[j]
    spectrum = np.zeros(q, dtype=np.int64)
    spectrum[mu] = sign
    # iterative Walsh-Hadamard butterfly
    hstep = 1
    while hstep < q:
        spectrum = spectrum.reshape(-1, 2 * hstep)
        left = spectrum[:, :hstep].copy()
        right = spectrum[:, hstep:].copy()
        spectrum[:, :hstep] = left + right
        spectrum[:, hstep:] = left - right
        spectrum = spectrum.reshape(-1)
        hstep *= 2
    return q + 1 + spectrum


def _assert_hasse_vec(n_arr: np.ndarray, q: int):
    if ((n_arr.astype(np.int64) - q - 1) ** 2 > 4 * q).any():
        raise AssertionError("Hasse bound violated in census counts")


def _classify_fibers(big, rows, n_arr, replaced, workers):
    qm1_primes = arith.factorize(big.order - 1).distinct_primes()
    counts: dict[int, int] = {}
    repl_cyclic = 0
    q_big = big.order

    def work(lo: int, hi: int):
        local: dict[int, int] = {}
        local_repl = 0
        for idx in range(lo, hi):
            n_pts = int(n_arr[idx])
            if any(n_pts % (ell * ell) == 0 for ell in qm1_primes):
                coeffs = tuple(int(v) for v in rows[idx])
                d = ec.divisor_structure(big, coeffs, n_pts).d
            else:
                d = 1
            local[d] = local.get(d, 0) + 1
            if replaced[idx] and d == 1:
                local_repl += 1
        return local, local_repl

    chunks = _chunk_ranges(q_big, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: work(*c), chunks))
    else:
        results = [work(*c) for c in chunks]
    for local, local_repl in results:
        for d, c in local.items():
            counts[d] = counts.get(d, 0) + c
        repl_cyclic += local_repl
    return counts, repl_cyclic


def _chunk_ranges(total: int, workers: int):
    parts = max(1, min(workers * 4, total)) if workers > 1 else 1
    step = (total + parts - 1) // parts
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


# ---------------------------------------------------------------------------
# place census


def place_census(
    curve: ec.WeierstrassCurve, n: int, workers: int = 1
) -> CensusReport:
    """Census of d_nu over the degree-n places of F_q(t).

    Places where a coefficient has a pole or the discriminant reduces to
    zero are tallied in bad_count and skipped, matching the set of places
    of bad reduction for the given model.
    """
    coeffs = curve.coefficients()
    if not all(isinstance(c, funcfield.RationalFunction) for c in coeffs):
        raise TypeError("place census needs a curve over F_q(t)")
    base = coeffs[0].field
    q = base.order
    if q**n > _CAP:
        raise TooLarge(f"place census needs q^n <= 2^24, got {q}^{n}")
    disc = curve.discriminant()
    if not disc:
        raise EccensusError("generic fiber is singular")

    big = gf.field_create(base.p, base.k * n)
    good_rows = []
    bad = 0
    total = 0

    if n == 1:
        total += 1
        inf = funcfield.infinity_place()
        if _bad_at_place(coeffs, disc, inf):
            bad += 1
        else:
            vals = [funcfield.specialize(c, inf, big) for c in coeffs]
            good_rows.append(tuple(v.pack() for v in vals))

    if base.k == 1:
        reps = _orbit_representatives(big, base.p, n)
        total += len(reps)
        nums = [c.num for c in coeffs]
        dens = [c.den for c in coeffs]
        for r in reps:
            den_vals = [d.evaluate(r) for d in dens]
            if not all(den_vals):
                bad += 1
                continue
            ddis = disc.den.evaluate(r)
            if not ddis or not disc.num.evaluate(r):
                bad += 1
                continue
            vals = [nm.evaluate(r) / dv for nm, dv in zip(nums, den_vals)]
            good_rows.append(tuple(v.pack() for v in vals))
    else:
        for pi in funcfield.monic_irreducibles(base, n):
            place = funcfield.Place(pi)
            total += 1
            if _bad_at_place(coeffs, disc, place):
                bad += 1
                continue
            vals = [funcfield.specialize(c, place, big) for c in coeffs]
            good_rows.append(tuple(v.pack() for v in vals))

    counts = _classify_places(big, good_rows, workers)
    report = CensusReport(
        n=n, counts=counts, bad_count=bad, total=total, label="places"
    )
    report.validate()
    return report


def _bad_at_place(coeffs, disc, place) -> bool:
    for c in coeffs:
        if funcfield.valuation(c, place) < 0:
            return True
    return funcfield.valuation(disc, place) > 0


def _orbit_representatives(big: gf.FiniteField, p: int, n: int):
    """Least element of each exact-degree-n Frobenius orbit, ascending.

    Each representative is the canonical root of one monic irreducible of
    degree n; there are (1/n) sum mu(e) q^(n/e) of them.
    """
    q_sub = p ** (big.k // n)  # order of the base field inside big
    reps = []
    seen = bytearray(big.order)
    for idx in range(big.order):
        if seen[idx]:
            continue
        e = big.from_index(idx)
        orbit = [idx]
        cur = e
        for _ in range(n - 1):
            cur = cur**q_sub
            orbit.append(cur.pack())
        for o in orbit:
            seen[o] = 1
        if len(set(orbit)) == n:
            reps.append(e)
    assert len(reps) == arith.monic_irreducible_count(q_sub, n)
    return reps


def _classify_places(big, rows, workers):
    if not rows:
        return {}
    n_list = kernels.point_count_many(big, rows)
    counts: dict[int, int] = {}
    qm1_primes = arith.factorize(big.order - 1).distinct_primes()

    def work(lo, hi):
        local: dict[int, int] = {}
        for i in range(lo, hi):
            n_pts = int(n_list[i])
            _assert_hasse_vec(np.array([n_pts]), big.order)
            if any(n_pts % (ell * ell) == 0 for ell in qm1_primes):
                d = ec.divisor_structure(big, rows[i], n_pts).d
            else:
                d = 1
            local[d] = local.get(d, 0) + 1
        return local

    chunks = _chunk_ranges(len(rows), workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: work(*c), chunks))
    else:
        results = [work(*c) for c in chunks]
    for local in results:
        for d, c in local.items():
            counts[d] = counts.get(d, 0) + c
    return counts


# ---------------------------------------------------------------------------
# the orbit identity tying the two censuses together


@dataclass
class OrbitIdentity:
    n: int
    family_cyclic: int
    place_side: int
    correction: int
    ok: bool
    per_degree: dict[int, int] = dc_field(default_factory=dict)


def orbit_identity_check(
    family: FiberFamily, curve: ec.WeierstrassCurve, n: int, workers: int = 1
) -> OrbitIdentity:
    """Verify f(n) = sum over d | n of d * (cyclic places of degree d) plus
    the replacement-fiber correction, exactly.

    The place side counts the degree-d places whose reduction, base-changed
    to F_{q^n}, stays cyclic; parameters in bad fibers are covered by the
    replacement correction term.
    """
    fam_report = family_census(family, n, workers=workers)
    q = family.q
    big = gf.field_create(family.field.p, family.field.k * n)
    per_degree = {}
    place_side = 0
    for d in arith.factorize(n).divisors():
        cyc = _cyclic_places_after_basechange(curve, d, big, workers)
        per_degree[d] = cyc
        place_side += d * cyc
    correction = fam_report.replaced_cyclic
    ok = fam_report.cyclic_count == place_side + correction
    return OrbitIdentity(
        n=n,
        family_cyclic=fam_report.cyclic_count,
        place_side=place_side,
        correction=correction,
        ok=ok,
        per_degree=per_degree,
    )


def _cyclic_places_after_basechange(curve, d, big, workers):
    """Degree-d places with good reduction whose base change to the big
    field is cyclic."""
    coeffs = curve.coefficients()
    base = coeffs[0].field
    disc = curve.discriminant()
    rows = []
    if d == 1:
        inf = funcfield.infinity_place()
        if not _bad_at_place(coeffs, disc, inf):
            vals = [funcfield.specialize(c, inf, big) for c in coeffs]
            rows.append(tuple(v.pack() for v in vals))
    if base.k == 1:
        mid = gf.field_create(base.p, d)
        for r_mid in _orbit_representatives(mid, base.p, d):
            den_vals = [c.den.evaluate(r_mid) for c in coeffs]
            if not all(den_vals):
                continue
            ddis = disc.den.evaluate(r_mid)
            if not ddis or not disc.num.evaluate(r_mid):
                continue
            vals = [
                gf.embed(c.num.evaluate(r_mid) / dv, big)
                for c, dv in zip(coeffs, den_vals)
            ]
            rows.append(tuple(v.pack() for v in vals))
    else:
        for pi in funcfield.monic_irreducibles(base, d):
            place = funcfield.Place(pi)
            if _bad_at_place(coeffs, disc, place):
                continue
            vals = [funcfield.specialize(c, place, big) for c in coeffs]
            rows.append(tuple(v.pack() for v in vals))
    counts = _classify_places(big, rows, workers)
    return counts.get(1, 0)
