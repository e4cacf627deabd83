"""Census kernels: the hot loops behind point counts and group structure.

Two interchangeable backends implement the same primitives:

* ``_fast`` - a compiled Cython extension with tight C loops;
* ``pyback`` - a numpy fallback, vectorized over the x-line, with plain
  packed-integer Python for the scalar point work.

The compiled backend is selected at import when available; set
``ECCENSUS_BACKEND=py`` or ``ECCENSUS_BACKEND=ext`` to force a choice.
Both backends are driven from the same field seed (same defining
polynomial, same multiplicative generator), so their outputs are
bit-for-bit identical; ``benchmarks/bench_kernels.py`` compares their
speed.
"""

from __future__ import annotations

import os

from .. import arith

try:
    from . import _fast

    HAVE_EXT = True
except ImportError:  # pragma: no cover - depends on the build
    _fast = None
    HAVE_EXT = False

from . import pyback

_FORCED = os.environ.get("ECCENSUS_BACKEND")


def active_name() -> str:
    if _FORCED in ("py", "ext"):
        if _FORCED == "ext" and not HAVE_EXT:
            raise ImportError("ECCENSUS_BACKEND=ext but the extension is not built")
        return _FORCED
    return "ext" if HAVE_EXT else "py"


def get_backend(name: str | None = None):
    name = name or active_name()
    if name == "ext":
        if not HAVE_EXT:
            raise ImportError("compiled kernel backend is not available")
        return _fast
    if name == "py":
        return pyback
    raise ValueError(f"unknown backend {name!r}")


def field_seed(field) -> dict:
    """Backend-independent precomputation for a finite field.

    Sharing the seed (in particular the multiplicative generator) keeps the
    two backends' tables, and therefore their scan orders, identical.
    """
    p, k, q = field.p, field.k, field.order
    seed = {
        "p": p,
        "k": k,
        "q": q,
        "modulus": tuple(field.modulus),
        "gen": field.multiplicative_generator().pack() if q > 2 else 1,
    }
    if p == 2:
        mask = 0
        for j in range(k):
            if field.absolute_trace(field.from_index(1 << j)):
                mask |= 1 << j
        seed["trace_mask"] = mask
        seed["as_pivots"] = tuple(field._artin_schreier_solver())
    return seed


_CTX_CACHE: dict = {}


def _ctx(field, name: str | None = None):
    name = name or active_name()
    key = (name, field.p, field.modulus)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = get_backend(name).make_ctx(field_seed(field))
        _CTX_CACHE[key] = ctx
    return ctx


def vector_tables(field):
    """The numpy table context for a field (log/exp, trace or character
    tables); available regardless of the active backend.  Used by census
    code for vectorized prep work outside the hot loops."""
    return _ctx(field, "py")


def point_count(field, coeffs, backend: str | None = None) -> int:
    """|E(F_Q)| for the packed curve (a1, a2, a3, a4, a6)."""
    return get_backend(backend).point_count(_ctx(field, backend), coeffs)


def point_count_many(field, coeff_rows, backend: str | None = None) -> list[int]:
    """Point counts for many packed curves over one field."""
    return get_backend(backend).point_count_many(_ctx(field, backend), coeff_rows)


def torsion_count(field, coeffs, m: int, backend: str | None = None) -> int:
    """#E[m](F_Q): the number of points killed by m, infinity included."""
    return get_backend(backend).torsion_count(_ctx(field, backend), coeffs, m)


def order_scan(
    field,
    coeffs,
    n: int,
    fac_primes,
    candidates,
    budget: int,
    backend: str | None = None,
) -> tuple[int, bool]:
    """Deterministic x-ascending scan of point orders.

    Returns (lcm of the orders seen, exhausted).  The scan stops early when
    the lcm reaches n or when every candidate prime l already has its full
    n-valuation inside the lcm; exhausted means every x was visited, in
    which case the lcm is the exact group exponent.
    """
    return get_backend(backend).order_scan(
        _ctx(field, backend), coeffs, n, tuple(fac_primes), tuple(candidates), budget
    )


def brute_structure(field, coeffs, backend: str | None = None) -> tuple[int, int]:
    """Independent full-table oracle: enumerate every point, compute every
    point's order, return (number of points, exponent = lcm of orders)."""
    ctx = _ctx(field, backend)
    be = get_backend(backend)
    n_guess = be.point_count(ctx, coeffs)
    fac = arith.factorize(n_guess).primes
    return be.brute_structure(ctx, coeffs, fac)
