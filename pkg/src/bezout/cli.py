"""Command line front-end.

Exit codes: 0 success, 1 usage or I/O error, 2 not solvable (not positive,
rank or factorization failure), 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .config import SolveConfig
from .errors import (
    BezoutError,
    NoConvergenceError,
    NotPositiveError,
    RankError,
    ShapeError,
    UnknownExampleError,
)
from .instances import EXAMPLES, example
from .series import CoeffSeries
from .solver import BezoutData, solve
from .spectral import spectral_factorize
from .verify import run_all

EXIT_OK, EXIT_USAGE, EXIT_UNSOLVABLE, EXIT_VERIFY = 0, 1, 2, 3

_LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p):
    p.add_argument("--input", required=True, help="input JSON file")
    p.add_argument("--output", help="output JSON file (default: stdout)")
    p.add_argument("--config", help="JSON file with SolveConfig fields; flags take precedence")
    p.add_argument("--order", type=int, help="section size N (block rows/columns)")
    p.add_argument("--degree", type=int, help="output degree of the series")
    p.add_argument("--tol-positivity", type=float)
    p.add_argument("--tol-factor", type=float)
    p.add_argument("--cross-check", action="store_true", default=None,
                   help="shadow every Gram solve with the dense oracle")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bezout", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="compute Xi0, Theta0, H0, Y, Y^-1, Xi, Theta, H")
    _add_config_flags(p)

    p = sub.add_parser("factorize", help="canonical spectral factor of a Laurent symbol")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--config")
    p.add_argument("--tol-positivity", type=float)
    p.add_argument("--tol-factor", type=float)

    p = sub.add_parser("verify", help="run every identity check; input is G or solve output")
    _add_config_flags(p)
    p.add_argument("--table", action="store_true", help="print the report table to stdout")

    p = sub.add_parser("example", help="write a built-in symbol")
    p.add_argument("name", help=f"one of {', '.join(sorted(EXAMPLES))}")
    p.add_argument("--output")
    return parser


def make_config(args) -> SolveConfig:
    cfg = SolveConfig.from_json_file(args.config) if getattr(args, "config", None) else SolveConfig()
    overrides = {
        "section_blocks": getattr(args, "order", None),
        "output_degree": getattr(args, "degree", None),
        "positivity_tol": getattr(args, "tol_positivity", None),
        "factor_tol": getattr(args, "tol_factor", None),
        "cross_check": getattr(args, "cross_check", None),
        "seed": getattr(args, "seed", None),
    }
    return cfg.replace(**{k: v for k, v in overrides.items() if v is not None})


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _write(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _summary(d: BezoutData) -> str:
    rows = ", ".join(f"[{', '.join(f'{x.real:.10f}' + (f'{x.imag:+.3e}j' if abs(x.imag) > 1e-12 else '') for x in r)}]" for r in d.xi0)
    return (
        f"m={d.m} p={d.p} margin={d.margin:.6g} degree={d.degree}\n"
        f"xi0 = [{rows}]\n"
        f"y tail mass {d.diagnostics.get('y_tail_mass', float('nan')):.2e}, "
        f"y_inv tail mass {d.diagnostics.get('y_inv_tail_mass', float('nan')):.2e}"
    )


def cmd_solve(args) -> int:
    G = CoeffSeries.from_dict(_read_json(args.input))
    cfg = make_config(args)
    try:
        d = solve(G, cfg)
    except NotPositiveError as exc:
        print(f"not solvable: {exc}", file=sys.stderr)
        for n, mgn in exc.ladder:
            print(f"  margin N={n:<5d} {mgn:.6e}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    except (RankError, NoConvergenceError) as exc:
        print(f"not solvable: {exc}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    _write(d.to_json(), args.output)
    print(_summary(d), file=sys.stderr)
    return EXIT_OK


def cmd_factorize(args) -> int:
    R = CoeffSeries.from_dict(_read_json(args.input))
    cfg = make_config(args)
    try:
        f = spectral_factorize(R, cfg)
    except (NotPositiveError, NoConvergenceError) as exc:
        print(f"factorization failed: {exc}", file=sys.stderr)
        return EXIT_UNSOLVABLE
    _write(json.dumps({"r_plus": f.r_plus.to_dict(), "residual": f.residual}), args.output)
    print(f"residual {f.residual:.3e} (section {f.section_size} blocks)", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    raw = _read_json(args.input)
    cfg = make_config(args)
    if "y" in raw:
        data = BezoutData.from_dict(raw)
        G = data.g
        diag = data.diagnostics
        if cfg.section_blocks is None and diag.get("section_blocks"):
            cfg = cfg.replace(section_blocks=int(diag["section_blocks"]))
        if cfg.output_degree is None:
            cfg = cfg.replace(output_degree=data.degree)
    else:
        data = None
        G = CoeffSeries.from_dict(raw)
    report = run_all(G, cfg, data=data)
    if args.output:
        _write(report.to_json(indent=1), args.output)
    out = sys.stdout if (args.table or not args.output) else sys.stderr
    print(report.to_table(), file=out)
    if report.passed:
        return EXIT_OK
    if report.precondition_failed:
        return EXIT_UNSOLVABLE
    return EXIT_VERIFY


def cmd_example(args) -> int:
    G = example(args.name)
    _write(G.to_json(), args.output)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "factorize": cmd_factorize,
    "verify": cmd_verify,
    "example": cmd_example,
}


def main(argv=None) -> int:
    level = _LOG_LEVELS.get(os.environ.get("BEZOUT_LOG", "quiet").lower(), logging.ERROR)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UnknownExampleError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, KeyError, ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BezoutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSOLVABLE


if __name__ == "__main__":
    sys.exit(main())
