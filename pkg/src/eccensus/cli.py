"""Command-line front end.

Subcommands map one-to-one onto the library: censuses (census-family,
census-places, compare), densities (gn, delta, delta1-subgroup), the SL2
suite (sl2-construct, sl2-check) and the ramification calculus (rho,
bound).  Tables are emitted as pretty text, CSV, or JSON; rationals always
appear exactly (as "p/q") next to a 2-decimal rendering, so emitted tables
re-parse to the computed values.  Exit codes: 0 ok, 2 usage, 3
computational error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import arith, census, density, ec, funcfield, gf, ramify, sl2
from .errors import EccensusError

_CENSUS_CAP = 12
_EXTENDED_CAP = 16


@dataclass
class RunConfig:
    """Validated run parameters shared by the table-producing subcommands."""

    subcommand: str
    q: int | None
    n_values: list[int]
    fmt: str
    workers: int
    extended: bool

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.extended and self.subcommand in ("census-family", "compare"):
            print(
                "extended census: n up to 16 can take minutes",
                file=sys.stderr,
            )


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        values = list(range(int(lo), int(hi) + 1))
    else:
        values = [int(text)]
    if not values or min(values) < 1:
        raise ValueError(f"bad n range {text!r}")
    return values


def _parse_curve(text: str):
    """Curve-spec grammar: "a1=<ratfn>, ..., a6=<ratfn> over F<q>(t)"."""
    if "over" not in text:
        raise ValueError('curve spec needs an "over F<q>(t)" clause')
    coeff_part, field_part = text.rsplit("over", 1)
    field_part = field_part.strip()
    if not field_part.startswith("F") or not field_part.endswith("(t)"):
        raise ValueError(f"bad field clause {field_part!r}")
    q = int(field_part[1:-3])
    qfac = arith.factorize(q)
    if len(qfac.primes) != 1:
        raise ValueError("constant field size must be a prime power")
    p, f = qfac.primes[0]
    base = gf.field_create(p, f)
    coeffs = {}
    for chunk in coeff_part.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, value = chunk.partition("=")
        name = name.strip()
        if name not in ("a1", "a2", "a3", "a4", "a6"):
            raise ValueError(f"unknown coefficient {name!r}")
        coeffs[name] = funcfield.parse_ratfn(value.strip(), base)
    zero = funcfield.RationalFunction.constant(base, 0)
    curve = ec.WeierstrassCurve(
        coeffs.get("a1", zero),
        coeffs.get("a2", zero),
        coeffs.get("a3", zero),
        coeffs.get("a4", zero),
        coeffs.get("a6", zero),
    )
    return curve, base


def _cell(value):
    if isinstance(value, Fraction):
        return {
            "rational": f"{value.numerator}/{value.denominator}",
            "decimal": density.render_decimal(value),
        }
    return value


def _cell_text(value):
    if isinstance(value, Fraction):
        return density.render_decimal(value)
    return str(value)


def emit_table(columns: list[str], rows: list[dict], fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        payload = {
            "columns": columns,
            "rows": [{k: _cell(r[k]) for k in columns} for r in rows],
        }
        print(json.dumps(payload, indent=2), file=out)
    elif fmt == "csv":
        print(",".join(columns), file=out)
        for r in rows:
            print(",".join(_cell_text(r[k]) for k in columns), file=out)
    else:
        widths = {
            k: max(len(k), *(len(_cell_text(r[k])) for r in rows)) if rows else len(k)
            for k in columns
        }
        print("  ".join(k.rjust(widths[k]) for k in columns), file=out)
        for r in rows:
            print("  ".join(_cell_text(r[k]).rjust(widths[k]) for k in columns), file=out)


def parse_json_table(text: str) -> list[dict]:
    """Re-parse an emitted JSON table, rationals back into Fractions."""
    payload = json.loads(text)
    rows = []
    for raw in payload["rows"]:
        row = {}
        for key, val in raw.items():
            if isinstance(val, dict) and "rational" in val:
                num, den = val["rational"].split("/")
                row[key] = Fraction(int(num), int(den))
            else:
                row[key] = val
        rows.append(row)
    return rows


def _family_for(args):
    if args.curve:
        curve, base = _parse_curve(args.curve)
        repl = census.standard_family(base.order).replacements if base.order in (2, 3, 5) else ()
        return census.specialization_family(curve, repl, label="cli curve")
    return census.standard_family(args.q)


def _check_cap(n_values, extended):
    cap = _EXTENDED_CAP if extended else _CENSUS_CAP
    if max(n_values) > cap:
        raise ValueError(
            f"n up to {max(n_values)} needs --extended (cap {cap})"
            if not extended
            else f"n cap is {cap}"
        )


def _cmd_census_family(args) -> int:
    cfg = RunConfig("census-family", args.q, _parse_range(args.n), args.format, args.workers, args.extended)
    _check_cap(cfg.n_values, cfg.extended)
    fam = _family_for(args)
    rows = []
    for n in cfg.n_values:
        rep = census.family_census(fam, n, workers=cfg.workers)
        rows.append({"n": n, "f": rep.cyclic_count, "total": rep.total, "replaced": rep.replaced_total})
    emit_table(["n", "f", "total", "replaced"], rows, cfg.fmt)
    return 0


def _cmd_census_places(args) -> int:
    cfg = RunConfig("census-places", None, _parse_range(args.n), args.format, args.workers, args.extended)
    curve, _ = _parse_curve(args.curve)
    rows = []
    for n in cfg.n_values:
        rep = census.place_census(curve, n, workers=cfg.workers)
        if args.d is not None:
            rows.append({"n": n, "d": args.d, "count": rep.counts.get(args.d, 0), "bad": rep.bad_count})
        else:
            for d in sorted(rep.counts) or [1]:
                rows.append({"n": n, "d": d, "count": rep.counts.get(d, 0), "bad": rep.bad_count})
    emit_table(["n", "d", "count", "bad"], rows, cfg.fmt)
    return 0


def _cmd_gn(args) -> int:
    cfg = RunConfig("gn", args.q, _parse_range(args.n), args.format, 1, False)
    rows = [{"n": n, "g": density.g_n(cfg.q, n)} for n in cfg.n_values]
    emit_table(["n", "g"], rows, cfg.fmt)
    return 0


def _cmd_compare(args) -> int:
    cfg = RunConfig("compare", args.q, _parse_range(args.n), args.format, args.workers, args.extended)
    _check_cap(cfg.n_values, cfg.extended)
    fam = census.standard_family(cfg.q)
    rows = []
    for n in cfg.n_values:
        f_n = census.family_census(fam, n, workers=cfg.workers).cyclic_count
        g_n = density.g_n(cfg.q, n)
        rows.append({"n": n, "f": f_n, "g": g_n, "f_minus_g": f_n - g_n})
    emit_table(["n", "f", "g", "f_minus_g"], rows, cfg.fmt)
    return 0


def _cmd_delta(args) -> int:
    cfg = RunConfig("delta", args.q, _parse_range(args.n), args.format, 1, False)
    if args.model == "generic":
        model = density.GenericIgusa(cfg.q)
    else:
        model = density.load_model(args.model)
        if model.q != cfg.q:
            raise ValueError("model q does not match --q")
    bounded = args.variant == "bounded"
    rows = [
        {"n": n, "delta": density.delta_n(model, n, bounded=bounded)}
        for n in cfg.n_values
    ]
    emit_table(["n", "delta"], rows, cfg.fmt)
    return 0


def _cmd_delta1_subgroup(args) -> int:
    h = sl2.load_subgroup(args.subgroup)
    value = density.delta1_from_subgroup(h, args.q)
    print(f"delta1 = {value.numerator}/{value.denominator} "
          f"({density.render_decimal(value, 4)})")
    return 0


def _cmd_sl2_construct(args) -> int:
    h = sl2.construct_union_subgroup(args.q)
    if args.format == "json":
        print(json.dumps(sl2.subgroup_to_json(h), indent=2))
    else:
        for a, b, c, d in h.elements:
            print(f"[[{a},{b}],[{c},{d}]]")
    return 0


def _cmd_sl2_check(args) -> int:
    h = sl2.load_subgroup(args.subgroup)
    union = sl2.is_union_of_kernels(h)
    print(f"order = {h.order}")
    for ell, sub in sorted(sl2.kernel_filtration(h).items()):
        print(f"|H_{ell}| = {sub.order}")
    print(f"union_of_kernels = {str(union).lower()}")
    if args.q:
        value = density.delta1_from_subgroup(h, args.q)
        print(f"delta1 = {value.numerator}/{value.denominator}")
    return 0


def _cmd_rho(args) -> int:
    steps = []
    for part in args.tower.split(","):
        e_s, dd_s = part.split(":")
        steps.append((int(e_s), int(dd_s)))
    datum = ramify.RamificationDatum(steps[0][0], steps[0][1], args.p)
    for e, dd in steps[1:]:
        datum = ramify.tower_compose(datum, ramify.RamificationDatum(e, dd, args.p))
    print(f"e={datum.e} dD={datum.dD} rho={ramify.rho_of(datum)}")
    return 0


def _cmd_bound(args) -> int:
    cfg = RunConfig("bound", args.q, _parse_range(args.n), args.format, 1, False)
    params = ramify.ChebotarevParams(
        genus=args.genus, s_deg=args.sdeg, rho=args.rho, q=args.q, c=args.c
    )
    rows = []
    for n in cfg.n_values:
        b = ramify.chebotarev_error_bound(params, n)
        rows.append({"n": n, "bound": b if b != ramify.SPLIT_IMPOSSIBLE else "split-impossible"})
    emit_table(["n", "bound"], rows, cfg.fmt)
    return 0


def _add_common(p, workers=True, fmt=True):
    if fmt:
        p.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
    if workers:
        p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eccensus",
        description="censuses of cyclic reductions, densities and bounds over F_q(t)",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("census-family", help="f(n) over a fiber family")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", required=True)
    p.add_argument("--curve", help="curve spec for the specialization family")
    p.add_argument("--extended", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_census_family)

    p = sub.add_parser("census-places", help="d_nu counts over degree-n places")
    p.add_argument("--curve", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--extended", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_census_places)

    p = sub.add_parser("gn", help="g(n) = q^n * bounded generic density")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", required=True)
    _add_common(p, workers=False)
    p.set_defaults(fn=_cmd_gn)

    p = sub.add_parser("compare", help="f, g and f - g per n")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", required=True)
    p.add_argument("--extended", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("delta", help="delta(E/K, 1, n) under a degree model")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--model", default="generic", help="'generic' or a model JSON path")
    p.add_argument("--variant", choices=("bounded", "unbounded"), default="bounded")
    _add_common(p, workers=False)
    p.set_defaults(fn=_cmd_delta)

    p = sub.add_parser("delta1-subgroup", help="delta(E/K,1,1) from a subgroup H")
    p.add_argument("--subgroup", required=True, help="subgroup JSON path")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(fn=_cmd_delta1_subgroup)

    p = sub.add_parser("sl2-construct", help="union-of-kernels subgroup for q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--format", choices=("pretty", "json"), default="pretty")
    p.set_defaults(fn=_cmd_sl2_construct)

    p = sub.add_parser("sl2-check", help="kernel filtration and union test")
    p.add_argument("--subgroup", required=True)
    p.add_argument("--q", type=int)
    p.set_defaults(fn=_cmd_sl2_check)

    p = sub.add_parser("rho", help="rho of a tower of (e:dD) steps")
    p.add_argument("--tower", required=True, help="lower-to-upper list, e.g. 12:14,2:4")
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(fn=_cmd_rho)

    p = sub.add_parser("bound", help="effective Chebotarev error bound")
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--sdeg", type=int, required=True)
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--c", type=int, default=1)
    _add_common(p, workers=False)
    p.set_defaults(fn=_cmd_bound)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EccensusError, AssertionError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
