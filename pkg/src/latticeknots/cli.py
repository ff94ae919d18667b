"""Command-line interface: ``latticeknots <command> ...``.

Exit status: 0 on success, 1 on an internal error, 2 on bad usage or
invalid input. Progress of long runs goes to standard error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Sequence

from . import knotdb
from .analysis import MirrorMode, enumerate_census, sample_census, stratify
from .bounds import bounds_report, check_census
from .bracket import Engine, jones
from .lattice import build_diagram, parse_resolution
from .laurent import LaurentPoly, ParseError

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2

EPILOG = ("exit status: 0 success, 1 internal error, 2 usage or validation error. "
          f"The knot table defaults to the bundled file; ${knotdb.TABLE_ENV} overrides it.")


class UsageError(Exception):
    pass


class _Progress:
    """Rate-limited progress lines on stderr."""

    def __init__(self, label: str, quiet: bool):
        self.label = label
        self.quiet = quiet
        self.last = 0.0

    def __call__(self, done: int, total: int) -> None:
        now = time.monotonic()
        if self.quiet or (done < total and now - self.last < 1.0):
            return
        self.last = now
        print(f"{self.label}: {done}/{total}", file=sys.stderr, flush=True)


def _table(args) -> knotdb.JonesTable:
    path = args.table or knotdb.default_table_path()
    try:
        return knotdb.load_table_file(path)
    except OSError as exc:
        raise UsageError(f"cannot read knot table {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"invalid knot table {path}: {exc}") from None


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _ident_fields(p: LaurentPoly, table: knotdb.JonesTable) -> dict:
    ident = knotdb.identify(p, table)
    out = {"status": ident.status, "label": ident.label}
    if ident.known:
        rec = table[ident.name]
        out.update(name=ident.name, mirrored=ident.mirrored,
                   crossing_number=rec.crossing_number, type=rec.knot_type.value)
    elif ident.status == "ambiguous":
        out["names"] = list(ident.names)
    return out


def cmd_jones(args) -> int:
    try:
        r = parse_resolution(args.resolution, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = build_diagram(args.n)
    p = jones(d, r, args.engine)
    table = _table(args)
    ident = _ident_fields(p, table)
    if args.format == "json":
        _emit(args, json.dumps({"n": args.n, "resolution": str(r), "jones": p.render(),
                                "machine": p.to_machine(), "identification": ident},
                               indent=2) + "\n")
    elif args.format == "csv":
        _emit(args, f"polynomial,name,mirrored\n{p.to_machine()},{ident.get('name', ident['label'])},"
                    f"{int(ident.get('mirrored', False))}\n")
    else:
        _emit(args, f"{p.render()}\n{p.to_machine()}\n{ident['status']}: {ident['label']}\n")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.n > 2:
        raise UsageError(f"n={args.n} has 2^{(2 * args.n + 1) ** 2} resolutions; "
                         "use 'latticeknots sample' for lattices beyond 5x5")
    if args.n < 0:
        raise UsageError("n must be non-negative")
    table = _table(args)
    report = enumerate_census(args.n, args.engine, table, args.mirror, args.workers,
                              checkpoint=args.checkpoint,
                              progress=_Progress("enumerate", args.quiet))
    if args.output:
        base = args.output[:-4] if args.output.endswith((".csv", ".json")) else args.output
        base = base[:-1] if base.endswith(".") else base
        with open(base + ".csv", "w", encoding="utf-8", newline="\n") as f:
            f.write(report.to_csv(table))
        with open(base + ".json", "w", encoding="utf-8", newline="\n") as f:
            f.write(report.to_json())
    if args.format == "csv" and not args.output:
        sys.stdout.write(report.to_csv(table))
    elif args.format == "json" and not args.output:
        sys.stdout.write(report.to_json())
    else:
        print(f"n={report.n} total={report.total} distinct={report.distinct_count} "
              f"unknot_count={report.unknot_count} unknot_ratio={report.unknot_ratio:.6g} "
              f"mirror={report.mirror_mode.value}")
        if args.check_bounds:
            sys.stdout.write(check_census(report, bounds_report(args.n), table).to_text())
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    if args.n < 0:
        raise UsageError("n must be non-negative")
    table = _table(args)
    est = sample_census(args.n, args.count, args.seed, table, args.workers,
                        progress=_Progress("sample", args.quiet))
    if args.format == "text":
        lo, hi = est.unknot_ci
        blo, bhi = est.beyond_table_ci
        _emit(args, f"n={est.n} samples={est.samples} seed={est.seed}\n"
                    f"unknot_ratio={est.unknot_ratio:.6g} ci95=[{lo:.6g}, {hi:.6g}]\n"
                    f"beyond_table_ratio={est.beyond_table_ratio:.6g} ci95=[{blo:.6g}, {bhi:.6g}]\n")
    else:
        _emit(args, est.to_json())
    return EXIT_OK


def cmd_bounds(args) -> int:
    try:
        report = bounds_report(args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, report.to_csv() if args.format == "csv" else report.to_text())
    return EXIT_OK


def cmd_stratify(args) -> int:
    if not 0 <= args.max_n <= 2:
        raise UsageError("--max-n must be between 0 and 2 (each stratum needs a full census)")
    table = _table(args)
    reports = [enumerate_census(n, Engine.SWEEP, table, MirrorMode.FOLDED, args.workers,
                                progress=_Progress(f"census n={n}", args.quiet))
               for n in range(args.max_n + 1)]
    strat = stratify(reports, table)
    if args.format == "csv":
        _emit(args, strat.to_csv())
    else:
        lines = []
        for m in range(args.max_n + 1):
            for p, e in strat.stratum(m):
                name = e.label or "?"
                lines.append(f"({e.m},{e.index}) {name} {p.render()}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_identify(args) -> int:
    try:
        p = LaurentPoly.parse(args.poly, var=args.var)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    if args.var != "q":
        p = p.substitute_power(2)  # t = q^2
    table = _table(args)
    ident = _ident_fields(p, table)
    factor = None
    if args.factor and ident["status"] == "beyond_table":
        pair = knotdb.try_factor(p, table)
        if pair:
            factor = [pair[0].label, pair[1].label]
    if args.format == "json":
        _emit(args, json.dumps({"jones": p.render(), "identification": ident, "factors": factor},
                               indent=2) + "\n")
    else:
        line = ident["label"] if ident["status"] != "beyond_table" else "beyond_table"
        if factor:
            line += f" (product {factor[0]} # {factor[1]})"
        _emit(args, line + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="latticeknots", description="Knots on potholder lattices.",
                                 epilog=EPILOG)
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def common(p: argparse.ArgumentParser, formats=("text", "csv", "json"), workers=False,
               engine=False, output=True) -> None:
        p.add_argument("--table", metavar="PATH",
                       help=f"knot table CSV (default: bundled, or ${knotdb.TABLE_ENV})")
        p.add_argument("--format", choices=formats, default="text",
                       help="output format (default: text)")
        if output:
            p.add_argument("--output", "-o", metavar="PATH", help="write to PATH instead of stdout")
        if workers:
            p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                           help="worker processes (default: all cores); results do not depend on it")
            p.add_argument("--quiet", action="store_true", help="no progress on stderr")
        if engine:
            p.add_argument("--engine", choices=[e.value for e in Engine], default="sweep",
                           help="bracket engine (default: sweep)")

    p = sub.add_parser("jones", help="Jones polynomial of one resolution", epilog=EPILOG)
    p.add_argument("--n", type=int, required=True, help="lattice parameter; grid is (2n+1)^2")
    p.add_argument("--resolution", required=True,
                   help="row-major string over '+' (horizontal over) and '-'")
    common(p, engine=True)
    p.set_defaults(func=cmd_jones)

    p = sub.add_parser("enumerate", help="exhaustive census (n <= 2)", epilog=EPILOG)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mirror", choices=[m.value for m in MirrorMode], default="separate",
                   help="count mirrors separately or fold them (default: separate)")
    p.add_argument("--checkpoint", metavar="PATH",
                   help="partial-counts file; resumes from it if present")
    p.add_argument("--check-bounds", action="store_true", help="also check stratum bounds")
    common(p, workers=True, engine=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sample", help="Monte-Carlo unknot and beyond-table ratios", epilog=EPILOG)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=100_000, help="samples (default: 100000)")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed (default: 0)")
    common(p, formats=("json", "text"), workers=True)
    p.set_defaults(func=cmd_sample)
    p.set_defaults(format="json")

    p = sub.add_parser("bounds", help="lower and upper bounds per stratum", epilog=EPILOG)
    p.add_argument("--n", type=int, required=True)
    common(p, formats=("text", "csv"))
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("stratify", help="(m, l_m) index of every knot up to --max-n",
                       epilog=EPILOG)
    p.add_argument("--max-n", type=int, default=1, help="largest lattice parameter (default: 1)")
    common(p, formats=("text", "csv"), workers=True)
    p.set_defaults(func=cmd_stratify)

    p = sub.add_parser("identify", help="look a Jones polynomial up in the table", epilog=EPILOG)
    p.add_argument("--poly", required=True, help="e.g. 'q^2+q^6-q^8' or '2:1,0,0,0,1,0,-1'")
    p.add_argument("--var", default="q", help="variable name; anything but q is read as t = q^2")
    p.add_argument("--factor", action="store_true",
                   help="if not in the table, try a product of two table knots")
    common(p, formats=("text", "json"))
    p.set_defaults(func=cmd_identify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
