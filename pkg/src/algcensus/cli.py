"""Command-line front end.  Every subcommand writes CSV (default) or a JSON envelope.

Exit codes: 0 success, 2 invalid flags, 3 desk-scale envelope exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from fractions import Fraction

from . import __version__
from .census import (
    CensusQuery,
    EnvelopeExceeded,
    algebraic_sequence,
    check_envelope,
    count_reducible,
    phi_count,
    sequence_count_in,
    uniform_breakpoints,
)
from .density import (
    DEFAULT_BUDGET,
    DensityError,
    closed_form_radius,
    main_term,
    phi_closed,
    phi_numeric,
    phi_sphere_estimate,
    remainder_scale,
    rho_mass,
)
from .roots import HalfOpenInterval, format_ext

SCHEMA = "algcensus/1"
log = logging.getLogger("algcensus")


class FlagError(ValueError):
    pass


# ---------------------------------------------------------------- formatting

def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    if x is None:
        return ""
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, float):
        return x if math.isfinite(x) else fmt(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


class Table:
    """Rows plus '#'-prefixed summary lines; renders as CSV or as JSON results."""

    def __init__(self, columns):
        self.columns = list(columns)
        self.rows: list[list] = []
        self.summary: dict = {}

    def add(self, *values):
        self.rows.append(list(values))

    def csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.summary.items():
            buf.write(f"# {k}={fmt(v) if not isinstance(v, (dict, list)) else json.dumps(_jsonable(v), sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()

    def results(self) -> dict:
        return {
            "summary": _jsonable(self.summary),
            "columns": self.columns,
            "rows": [dict(zip(self.columns, (_jsonable(v) for v in r))) for r in self.rows],
        }


# ---------------------------------------------------------------- flag parsing

def parse_interval(text: str) -> HalfOpenInterval:
    try:
        return HalfOpenInterval.parse(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FlagError(f"bad interval {text!r}: {exc}") from None


def parse_grid(text: str) -> list[float]:
    try:
        a, b, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise FlagError(f"bad grid {text!r}; expected start:stop:step") from None
    if not (step > 0 and b >= a and all(map(math.isfinite, (a, b, step)))):
        raise FlagError(f"bad grid {text!r}")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 12) for i in range(count)]


def parse_heights(text: str) -> list[int]:
    try:
        if ":" in text:
            a, b, step = (int(v) for v in text.split(":"))
            out = list(range(a, b + 1, step))
        else:
            out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise FlagError(f"bad height list {text!r}") from None
    if not out or any(q < 1 for q in out):
        raise FlagError(f"bad height list {text!r}")
    return out


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise FlagError(f"bad rational {text!r}") from None


def positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def threads_flag(text: str):
    if text == "auto":
        return text
    return positive(text)


# ---------------------------------------------------------------- commands

def cmd_census(args) -> Table:
    interval = parse_interval(args.interval)
    bins = uniform_breakpoints(interval, args.bins) if args.bins else None
    check_envelope(args.degree, args.height, args.force)
    rep = phi_count(CensusQuery(args.degree, args.height, interval, bins), threads=args.threads,
                    force=args.force, reducible=args.count_reducible)
    n, Q = args.degree, args.height
    t = Table(["bin_lo", "bin_hi", "count", "main_term", "residual", "residual_over_Qn"])
    for lo, hi, c in zip(rep.edges, rep.edges[1:], rep.per_bin):
        mt = main_term(n, Q, HalfOpenInterval(lo, hi), args.budget)
        t.add(format_ext(lo), format_ext(hi), c, mt, c - mt, (c - mt) / Q ** n)
    t.summary["phi"] = rep.phi
    t.summary["total_A_n"] = rep.total_A_n
    t.summary["shards"] = rep.shards
    if args.by_k:
        t.summary["by_k"] = {str(k): v for k, v in rep.by_k.items()}
    if args.count_reducible:
        t.summary["reducible_count"] = count_reducible(n, Q, threads=args.threads, force=args.force)
        t.summary["reducible_convention"] = "integer vectors with a_n != 0"
    return t


def cmd_density(args) -> Table:
    ts = parse_grid(args.grid)
    n = args.degree
    cols = ["t", "value", "abs_error", "method", "closed_form"]
    if args.sphere:
        cols += ["sphere", "sphere_method"]
    t = Table(cols)
    radius = closed_form_radius(n)
    for x in ts:
        est = phi_numeric(n, x, args.budget)
        closed = phi_closed(n, x) if abs(x) <= radius + 1e-12 else None
        row = [x, est.value, est.abs_error, est.method, closed]
        if args.sphere:
            s = phi_sphere_estimate(n, x)
            row += [s.value, s.method]
        t.add(*row)
    return t


def cmd_compare(args) -> Table:
    n, Q = args.degree, args.height
    interval = parse_interval(args.interval)
    bins = uniform_breakpoints(interval, args.bins)
    check_envelope(n, Q, args.force)
    rep = phi_count(CensusQuery(n, Q, interval, bins), threads=args.threads, force=args.force)
    t = Table(["bin_lo", "bin_hi", "count", "main_term", "residual", "relative_deviation", "normalized_residual"])
    scale = remainder_scale(n, Q)
    worst = 0.0
    worst_rel = 0.0
    for lo, hi, c in zip(rep.edges, rep.edges[1:], rep.per_bin):
        mt = main_term(n, Q, HalfOpenInterval(lo, hi), args.budget)
        rel = (c - mt) / mt if mt > 0 else float("nan")
        t.add(format_ext(lo), format_ext(hi), c, mt, c - mt, rel, (c - mt) / scale)
        worst = max(worst, abs(c - mt) / scale)
        if mt >= args.min_main_term:
            worst_rel = max(worst_rel, abs(rel))
    t.summary["phi"] = rep.phi
    t.summary["max_normalized_residual"] = worst
    t.summary["max_relative_deviation"] = worst_rel
    t.summary["min_main_term"] = args.min_main_term
    return t


def cmd_farey(args) -> Table:
    from .farey import a1_relation_check, discrepancy, extremal_gap_ratio, farey_count, walfisz_normalized

    Q = args.height
    cols = ["Q", "farey_count", "a1_lhs", "a1_rhs"]
    if args.discrepancy:
        cols.append("discrepancy")
    if args.extremal:
        cols.append("extremal_ratio")
    t = Table(cols)
    lhs, rhs = a1_relation_check(Q)
    row = [Q, farey_count(Q), lhs, rhs]
    if args.discrepancy:
        row.append(discrepancy(Q))
    if args.extremal:
        if Q < 2:
            raise FlagError("--extremal needs --height >= 2")
        row.append(extremal_gap_ratio(Q))
    t.add(*row)
    if Q >= 3:
        t.summary["walfisz_normalized"] = walfisz_normalized(Q)
    return t


def cmd_lattice(args) -> Table:
    from .lattice import STANDARD_REGIONS, Region, lattice_report

    if args.region in STANDARD_REGIONS and args.dim:
        region = STANDARD_REGIONS[args.region](args.dim)
    else:
        try:
            region = Region.load(args.region)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise FlagError(f"cannot read region {args.region!r}: {exc}") from None
    rep = lattice_report(region, args.height)
    t = Table(["q", "total_points", "primitive_points", "main_term", "measure_estimate"])
    t.add(rep.q, rep.total_points, rep.primitive_points, rep.main_term, rep.measure_estimate)
    return t


def cmd_gaps(args) -> Table:
    from .gaps import constant_sweep
    from .report import fit_loglog

    x0 = parse_rational(args.rational)
    Qs = parse_heights(args.heights)
    for Q in Qs:
        check_envelope(args.degree, Q, args.force)
    probes = constant_sweep(args.degree, x0, Qs, threads=args.threads, force=args.force)
    t = Table(["Q", "x0", "distance_lower", "distance", "implied_constant", "witness"])
    for p in probes:
        t.add(p.Q, p.x0, p.nearest_distance, p.distance, p.implied_constant, str(p.witness.coeffs[::-1]))
    consts = [p.implied_constant for p in probes]
    t.summary["c_min"] = min(consts)
    t.summary["c_max"] = max(consts)
    if len(probes) >= 4:
        s = fit_loglog([(p.Q, float(p.nearest_distance)) for p in probes], "Q")
        t.summary["slope"] = s.fitted_slope
        t.summary["slope_ci_lo"], t.summary["slope_ci_hi"] = s.slope_ci
    return t


def cmd_sequence(args) -> Table:
    interval = parse_interval(args.interval)
    entries = algebraic_sequence(args.degree, args.count, threads=args.threads, force=args.force)
    t = Table(["index", "height", "lo", "hi", "approx", "poly"])
    for i, e in enumerate(entries, start=1):
        t.add(i, e.height, Fraction(e.interval.lo), Fraction(e.interval.hi), e.approx,
              " ".join(str(c) for c in e.poly.coeffs[::-1]))
    inside = sequence_count_in(entries, interval)
    t.summary["count_in_interval"] = inside
    t.summary["share"] = inside / args.count
    t.summary["expected_share"] = rho_mass(args.degree, interval, args.budget)
    return t


COMMANDS = {
    "census": cmd_census,
    "density": cmd_density,
    "compare": cmd_compare,
    "farey": cmd_farey,
    "lattice": cmd_lattice,
    "gaps": cmd_gaps,
    "sequence": cmd_sequence,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    common.add_argument("--threads", type=threads_flag, default="auto",
                        help="worker threads (ALGCENSUS_THREADS overrides)")
    common.add_argument("--seed", type=int, default=12345)
    common.add_argument("--budget", type=positive, default=DEFAULT_BUDGET, help="quadrature nodes per density value")
    common.add_argument("--force", action="store_true", help="run beyond the desk-scale envelope")
    common.add_argument("--verbose", "-v", action="store_true")

    p = argparse.ArgumentParser(prog="algcensus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("census", parents=[common], help="exact counts over an interval")
    s.add_argument("--degree", type=positive, required=True)
    s.add_argument("--height", type=positive, required=True)
    s.add_argument("--interval", default="-inf,inf")
    s.add_argument("--bins", type=positive)
    s.add_argument("--by-k", action="store_true")
    s.add_argument("--count-reducible", action="store_true")

    s = sub.add_parser("density", parents=[common], help="tabulate the counting density")
    s.add_argument("--degree", type=positive, required=True)
    s.add_argument("--grid", required=True, help="start:stop:step")
    s.add_argument("--sphere", action="store_true", help="add the Euclidean-height density")

    s = sub.add_parser("compare", parents=[common], help="census counts against the main term")
    s.add_argument("--degree", type=positive, required=True)
    s.add_argument("--height", type=positive, required=True)
    s.add_argument("--bins", type=positive, required=True)
    s.add_argument("--interval", default="-2,2")
    s.add_argument("--min-main-term", type=float, default=200.0)

    s = sub.add_parser("farey", parents=[common], help="Farey counts and discrepancy")
    s.add_argument("--height", type=positive, required=True)
    s.add_argument("--discrepancy", action="store_true")
    s.add_argument("--extremal", action="store_true")

    s = sub.add_parser("lattice", parents=[common], help="integer and primitive points in a region")
    s.add_argument("--region", required=True, help="region JSON file, or a standard name with --dim")
    s.add_argument("--dim", type=positive)
    s.add_argument("--height", type=positive, required=True)

    s = sub.add_parser("gaps", parents=[common], help="distance to the nearest algebraic number")
    s.add_argument("--degree", type=positive, required=True)
    s.add_argument("--rational", required=True)
    s.add_argument("--heights", required=True, help="comma list or start:stop:step")

    s = sub.add_parser("sequence", parents=[common], help="first N numbers ordered by height")
    s.add_argument("--degree", type=positive, required=True)
    s.add_argument("--count", type=positive, required=True)
    s.add_argument("--interval", default="-inf,inf")
    return p


def _params(args) -> dict:
    skip = {"output", "threads", "format", "verbose", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _validate(args) -> None:
    """Check every flag that needs more than a type conversion, before computing."""
    if hasattr(args, "interval"):
        parse_interval(args.interval)
    if args.command == "density":
        parse_grid(args.grid)
    if args.command == "gaps":
        parse_rational(args.rational)
        parse_heights(args.heights)
    if args.command in ("census", "compare") and args.bins:
        uniform_breakpoints(parse_interval(args.interval), args.bins)


VALUE_FLAGS = ("--interval", "--grid", "--rational", "--heights")


def _glue_values(argv: list[str]) -> list[str]:
    """Turn ``--interval -1,1`` into ``--interval=-1,1`` so argparse does not read it as a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_glue_values(argv))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _validate(args)
        table = COMMANDS[args.command](args)
    except (FlagError, DensityError) as exc:
        parser.error(str(exc))
    except ValueError as exc:
        parser.error(str(exc))
    except EnvelopeExceeded as exc:
        print(f"algcensus: {exc}", file=sys.stderr)
        return 3
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": args.command, "params": _jsonable(_params(args)),
               "results": table.results()}
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        text = table.csv()
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
