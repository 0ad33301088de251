"""Command line entry point: ``pxpzero {bounds,verify,fit,series,plot}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import report
from .hilbert import MAX_BASIS_L
from .spectra import ResourceLimitError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_TIGHT = 2
EXIT_RESOURCE = 3

log = logging.getLogger("pxpzero")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, l_max_default: int) -> None:
    p.add_argument("--l-min", type=int, default=0)
    p.add_argument("--l-max", type=int, default=l_max_default)
    p.add_argument("--boundary", choices=["obc", "pbc", "all"], default="all")
    p.add_argument("--momentum", choices=["0", "pi", "both"], default="both")
    p.add_argument("--inversion", choices=["plus", "minus", "both", "merged", "all"],
                   default="both")
    p.add_argument("--out", default=None, help="output path (stdout if omitted)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="seed for modular-rank primes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pxpzero", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="combinatorial lower bounds per (L, sector)")
    _common(p, 25)

    p = sub.add_parser("verify", help="exact zero-mode counts against the bounds")
    _common(p, 14)

    p = sub.add_parser("fit", help="fit |Q| ~ mu * golden**(L/2)")
    _common(p, 1000)
    p.add_argument("--exclude", type=int, default=50, help="drop L <= this value")
    p.add_argument("--method", choices=["linear", "log"], default="linear")

    p = sub.add_parser("series", help="generating-function coefficients")
    _common(p, 40)

    p = sub.add_parser("plot", help="SVG of |Q| from a bounds CSV")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--title", default=None)
    return parser


def _sectors(args):
    return report.select_sectors(args.boundary, args.momentum, args.inversion)


def _fit_families(args) -> list[str]:
    out = []
    if args.boundary in ("obc", "all"):
        out.append("obc")
    if args.boundary in ("pbc", "all"):
        if args.momentum in ("0", "both"):
            out.append("pbc-0")
        if args.momentum in ("pi", "both"):
            out.append("pbc-pi")
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "bounds":
            reports = report.run_bounds(args.l_min, args.l_max, _sectors(args), args.threads)
            report.write_text(report.format_reports(reports, args.format), args.out)
        elif args.command == "verify":
            if args.l_max > MAX_BASIS_L:
                raise ValueError(f"--l-max must be at most {MAX_BASIS_L} for verify")
            reports = report.run_verify(args.l_min, args.l_max, _sectors(args),
                                        seed=args.seed, threads=args.threads)
            report.write_text(report.format_reports(reports, args.format), args.out)
            loose = [r for r in reports if r.tight is False]
            for r in loose:
                log.error("bound not tight: L=%d %s zero modes %d > bound %d",
                          r.L, r.sector.label(), r.zero_modes_exact, r.lower_bound)
            if loose:
                print(f"NON-TIGHT BOUNDS FOUND: {len(loose)}", file=sys.stderr)
                return EXIT_NOT_TIGHT
        elif args.command == "fit":
            fits = report.run_fit(args.l_max, args.exclude, _fit_families(args), args.method)
            if args.format == "json":
                text = json.dumps([f.as_dict() for f in fits], indent=1) + "\n"
            else:
                rows = [{"family": f.family, "inversion": f.inversion, "mu": f"{f.mu:.6g}",
                         "mu_error": f"{f.mu_error:.3g}", "l_min": str(f.window[0]),
                         "l_max": str(f.window[1]), "points": str(f.n_points),
                         "method": f.method} for f in fits]
                text = report.format_rows(rows, list(rows[0]) if rows else [], "csv")
            report.write_text(text, args.out)
        elif args.command == "series":
            rows = report.series_rows(max(args.l_max, 1))
            rows = [r for r in rows if int(r["L"]) >= args.l_min]
            fields = ["L", "f", "g", "two_g_minus_f", "fibonacci", "identity"]
            report.write_text(report.format_rows(rows, fields, args.format), args.out)
        elif args.command == "plot":
            report.emit_plot(args.csv, args.out, args.title)
    except ResourceLimitError as err:
        print(f"resource limit: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except MemoryError:
        print("resource limit: out of memory", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError) as err:
        print(f"pxpzero: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
