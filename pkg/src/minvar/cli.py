"""``minvar`` command line: solve, verify, compare and generate systems.

Exit codes::

    0   success (a degenerate MV solve is still a success)
    1   verify: at least one check failed
    2   A is not full row rank
    3   dimension mismatch, or the system is not underdetermined
    4   unreadable, malformed or unsupported input file
    5   the requested quantity does not exist because A u = 0
    64  bad command-line usage
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio, solver
from .errors import (
    DegenerateSystemError,
    DimensionError,
    ParseError,
    RankDeficientError,
)
from .verify import verify_system

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_RANK = 2
EXIT_DIMENSION = 3
EXIT_PARSE = 4
EXIT_DEGENERATE = 5
EXIT_USAGE = 64

DEGENERATE_NOTE = ("MV not unique; variance equal for all solutions differing by a constant; "
                   "the MN solution attains the minimum variance")
_MAX_GEN_DRAWS = 100


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which would collide with EXIT_RANK
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _add_system_args(p):
    p.add_argument("--A", dest="matrix_path", required=True, help="coefficient matrix file")
    p.add_argument("--b", dest="rhs_path", required=True, help="right-hand side file")
    p.add_argument("--format", choices=["mm", "csv"], default=None,
                   help="input format (default: from the file extension)")
    p.add_argument("--tol", type=_positive_float, default=1e-12,
                   help="rank and degeneracy tolerance (default 1e-12)")
    p.add_argument("--out", dest="output_path", default=None,
                   help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="minvar", description=(
        "Minimum norm and minimum variance solutions of underdetermined linear systems."))
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("solve", help="solve for the MN, MV or base solution")
    p.add_argument("--method", choices=["mn", "mv", "base"], default="mv")
    _add_system_args(p)

    p = sub.add_parser("verify", help="check the closed forms against the oracle")
    _add_system_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive_int, default=100)

    p = sub.add_parser("compare", help="compare norm, mean and variance of MN and MV")
    _add_system_args(p)

    p = sub.add_parser("gen", help="write a random full-rank system")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True,
                   help="files are written to PREFIX_A.EXT and PREFIX_b.EXT")
    p.add_argument("--format", choices=["mm", "csv"], default="mm")
    p.add_argument("--out", dest="output_path", default=None)
    return parser


def _load_system(args):
    A = fileio.parse_matrix_file(args.matrix_path, args.format)
    b, warnings = fileio.load_vector(args.rhs_path, args.format)
    system = solver.build_system(A, b, degeneracy_tol=args.tol, pivot_tol=args.tol)
    return system, warnings


def run_solve(args) -> tuple:
    system, warnings = _load_system(args)
    report = solver.solve(system, args.method)
    payload = report.to_dict()
    payload["warnings"] = warnings + payload["warnings"]
    return payload, EXIT_OK


def run_verify(args) -> tuple:
    system, warnings = _load_system(args)
    checks = verify_system(system, trials=args.trials, seed=args.seed)
    passed = all(c.passed for c in checks)
    payload = {
        "degenerate": solver.is_degenerate(system),
        "seed": args.seed,
        "trials": args.trials,
        "checks": [c.to_dict() for c in checks],
        "pass": passed,
        "warnings": warnings,
    }
    return payload, EXIT_OK if passed else EXIT_CHECK_FAILED


def _summary(report) -> dict:
    return {"squared_norm": report.squared_norm, "mean": report.mean,
            "variance": report.variance}


def run_compare(args) -> tuple:
    system, warnings = _load_system(args)
    mn = solver.solve_mn(system)
    mv = solver.solve_mv(system)
    ratio = mv.variance / mn.variance if mn.variance != 0.0 else None
    payload = {
        "MN": _summary(mn),
        "MV": _summary(mv),
        "variance_ratio": ratio,
        "alpha_star": mv.alpha_star,
        "degenerate": mv.degenerate,
        "note": DEGENERATE_NOTE if mv.degenerate else None,
        "warnings": warnings + list(mv.warnings),
    }
    return payload, EXIT_OK


def run_gen(args) -> tuple:
    if not 1 <= args.m < args.n:
        raise DimensionError(f"need 1 <= m < n, got m={args.m}, n={args.n}")
    rng = np.random.default_rng(args.seed)
    for draw in range(1, _MAX_GEN_DRAWS + 1):
        A = rng.standard_normal((args.m, args.n))
        b = rng.standard_normal(args.m)
        try:
            solver.build_system(A, b)
        except RankDeficientError:
            continue
        break
    else:
        raise RankDeficientError(f"no full-rank draw in {_MAX_GEN_DRAWS} attempts")
    ext = ".mtx" if args.format == "mm" else ".csv"
    a_path = f"{args.out_prefix}_A{ext}"
    b_path = f"{args.out_prefix}_b{ext}"
    Path(a_path).parent.mkdir(parents=True, exist_ok=True)
    fileio.write_matrix(a_path, A, args.format)
    fileio.write_matrix(b_path, b.reshape(-1, 1), args.format)
    payload = {"A": a_path, "b": b_path, "m": args.m, "n": args.n,
               "seed": args.seed, "draws": draw}
    return payload, EXIT_OK


_COMMANDS = {"solve": run_solve, "verify": run_verify, "compare": run_compare, "gen": run_gen}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, code = _COMMANDS[args.subcommand](args)
    except RankDeficientError as exc:
        print(f"error: rank deficient: {exc}", file=sys.stderr)
        return EXIT_RANK
    except DimensionError as exc:
        print(f"error: dimension: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ParseError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DegenerateSystemError as exc:
        print(f"error: degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE

    text = fileio.dumps(payload) + "\n"
    if args.output_path:
        Path(args.output_path).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
