"""Command-line interface: ``fracops {coeffs,norm,eval,verify,table}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 at least one
value missed its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings

import numpy as np

from .errors import FracOpsError, QuadratureWarning
from .functions import parse_function
from .normalization import prefactor
from .operators import OperatorSpec, evaluate, grid_eval
from .quadrature import QuadratureConfig
from .serialize import write_csv, write_json
from .stencil import build_stencil, coefficient_rows

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3

OPERATORS = {
    "lw+": "lw_plus",
    "lw-": "lw_minus",
    "riesz": "riesz",
    "feller": "feller",
    "feller-rot": "feller_rotation",
    "central": "central",
    "hyper": "hyperspherical",
}


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_operator_args(p: argparse.ArgumentParser, with_alpha: bool = True) -> None:
    p.add_argument("--operator", required=True, choices=list(OPERATORS),
                   help="operator family")
    if with_alpha:
        p.add_argument("--alpha", type=float, required=True, help="order alpha > 0")
    p.add_argument("--k", type=int, default=None, help="stencil order (central only)")
    p.add_argument("--theta", type=float, default=None, help="skewness (feller, feller-rot)")
    p.add_argument("--angles", type=_floats, default=(),
                   help="hyperspherical angles theta_1,...,theta_{n-1} (hyper only)")
    p.add_argument("--function", required=True,
                   help="catalog entry NAME[:param=value,...], e.g. gaussian:sigma=2")
    p.add_argument("--rel-tol", type=float, default=1e-8, help="relative tolerance (default 1e-8)")
    p.add_argument("--abs-tol", type=float, default=1e-12,
                   help="absolute tolerance (default 1e-12)")
    p.add_argument("--unsafe-theta", action="store_true",
                   help="allow feller theta outside |theta| <= min(alpha, 2 - alpha)")


def _spec(args, alpha: float) -> OperatorSpec:
    return OperatorSpec(OPERATORS[args.operator], alpha, k=args.k, theta=args.theta,
                        angles=tuple(args.angles), unsafe_theta=args.unsafe_theta)


def _config(args) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _output(args):
    return open(args.output, "w", newline="") if args.output else sys.stdout


# subcommands ------------------------------------------------------------------

def cmd_coeffs(args) -> int:
    s = build_stencil(args.k)
    if args.format == "json":
        json.dump({"k": s.k, "offsets": list(s.offsets),
                   "coefficients": [str(c) for c in s.coefficients]}, sys.stdout)
        sys.stdout.write("\n")
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["k", "n", "offset", "numerator", "denominator"])
        w.writerows(coefficient_rows(s.k))
    return EXIT_OK


def cmd_norm(args) -> int:
    rec = prefactor(args.k, args.alpha).as_dict()
    if args.format == "json":
        json.dump(rec, sys.stdout)
        sys.stdout.write("\n")
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(list(rec))
        w.writerow([format(v, ".17g") if isinstance(v, float) else v for v in rec.values()])
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.points < 1:
        raise UsageError("--points must be at least 1")
    if args.xmax < args.xmin:
        raise UsageError("--xmax must not be smaller than --xmin")
    spec = _spec(args, args.alpha)
    f = parse_function(args.function)
    grid = np.linspace(args.xmin, args.xmax, args.points)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        result = grid_eval(spec, f, grid, _config(args))
    fh = _output(args)
    try:
        (write_json if args.format == "json" else write_csv)(result, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if not result.all_converged:
        bad = sum(not c for c in result.converged)
        print(f"warning: {bad} of {len(grid)} points missed the tolerance", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_table(args) -> int:
    f = parse_function(args.function)
    cfg = _config(args)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["alpha", "re_value", "im_value", "error_estimate", "converged"])
    ok = True
    for a in args.alphas:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", QuadratureWarning)
            est = evaluate(_spec(args, a), f, args.x, cfg, full_output=True)
        v = complex(est.value)
        w.writerow([format(a, ".17g"), format(v.real, ".17g"), format(v.imag, ".17g"),
                    format(est.error_estimate, ".17g"), "true" if est.converged else "false"])
        ok = ok and est.converged
    return EXIT_OK if ok else EXIT_NONCONVERGED


def cmd_verify(args) -> int:
    from .verify import run_suite

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        reports = run_suite(args.suite, args.k_max)
    total = failed = 0
    for rep in reports:
        for c in rep.cases:
            total += 1
            failed += not c.passed
            if args.verbose or not c.passed:
                print(f"{'PASS' if c.passed else 'FAIL'}  {rep.suite}: {c.description}"
                      + ("" if c.passed else f"  expected={c.expected} actual={c.actual}"
                         f" tol={c.tolerance:.3g}"))
        n_bad = sum(not c.passed for c in rep.cases)
        print(f"[{'PASS' if rep.overall_pass else 'FAIL'}] {rep.suite}: "
              f"{len(rep.cases) - n_bad}/{len(rep.cases)} cases")
        for key, val in rep.details.items():
            print(f"    {key}: {val}")
    print(f"{total - failed}/{total} cases passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracops",
                                description="Fractional derivatives of arbitrary order.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", help="central-difference coefficients of order k")
    c.add_argument("--k", type=int, required=True, help="stencil order k >= 1")
    c.add_argument("--format", choices=("csv", "json"), default="csv", help="default csv")
    c.set_defaults(func=cmd_coeffs)

    n = sub.add_parser("norm", help="normalization prefactor of the order-k family")
    n.add_argument("--k", type=int, required=True, help="stencil order k >= 1")
    n.add_argument("--alpha", type=float, required=True, help="order in (0, k)")
    n.add_argument("--format", choices=("csv", "json"), default="csv", help="default csv")
    n.set_defaults(func=cmd_norm)

    e = sub.add_parser("eval", help="evaluate an operator on a uniform grid")
    _add_operator_args(e)
    e.add_argument("--xmin", type=float, required=True)
    e.add_argument("--xmax", type=float, required=True)
    e.add_argument("--points", type=int, required=True, help="number of grid points")
    e.add_argument("--format", choices=("csv", "json"), default="csv", help="default csv")
    e.add_argument("--output", default=None, help="output file (default stdout)")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="run the built-in verification suites")
    v.add_argument("--suite", default="all",
                   choices=("all", "stencil", "norm", "limits", "equivalence", "symmetry",
                            "scaling"), help="default all")
    v.add_argument("--k-max", type=int, default=4, help="largest order checked (default 4)")
    v.add_argument("--verbose", "-v", action="store_true", help="list passing cases too")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="one operator value per alpha at a single point")
    _add_operator_args(t, with_alpha=False)
    t.add_argument("--alphas", type=_floats, required=True, help="comma-separated orders")
    t.add_argument("--x", type=float, default=0.0, help="evaluation point (default 0)")
    t.set_defaults(func=cmd_table)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FracOpsError, ValueError) as exc:
        print(f"fracops {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
