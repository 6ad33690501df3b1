"""Command-line front end writing CSV data.

Exit codes: 0 success, 2 usage or domain error, 3 numerical failure,
4 unsupported parameter combination.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from typing import Iterable, Sequence

import numpy as np

from . import density, diamag, sharpconst, spectra
from .errors import (AccuracyError, BracketError, DomainError, RangeError, SearchError,
                     UnsupportedError)
from .specfun import DEFAULT_POLICY, NumericPolicy

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_UNSUPPORTED = 0, 2, 3, 4

# Units: lengths are in the domain's own unit L, energies in 1/L^2.
_DIMLESS = "[1]"
_ENERGY = "[1/L^2]"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.12g" % float(value)


def write_csv(stream, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def read_policy_file(path: str) -> dict[str, str]:
    """Flat key=value lines; blank lines and # comments are skipped."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DomainError(f"{path}:{lineno}: expected key=value")
            values[key.strip()] = value.strip()
    return values


def build_policy(args: argparse.Namespace) -> NumericPolicy:
    policy = DEFAULT_POLICY
    if args.policy_file:
        policy = NumericPolicy.from_mapping(read_policy_file(args.policy_file), policy)
    flags = {name: getattr(args, name) for name in
             ("rel_tol", "abs_tol", "max_series_terms", "max_quad_depth", "root_tol")
             if getattr(args, name) is not None}
    return NumericPolicy.from_mapping(flags, policy) if flags else policy


# ------------------------------------------------------------ commands ---

def cmd_density(args, policy):
    if args.steps < 2 or args.t_max <= args.t_min:
        raise DomainError("need --steps >= 2 and --t-max > --t-min")
    t = np.linspace(args.t_min, args.t_max, args.steps)
    rho = np.atleast_1d(density.rho(args.alpha, t, policy))
    asym = np.full_like(t, np.nan)
    pos = t > 0
    asym[pos] = density.rho_asymptotic(args.alpha, t[pos])
    header = [f"t {_DIMLESS}", f"rho {_DIMLESS}", f"rho_asymptotic {_DIMLESS}"]
    return header, zip(t, rho, asym)


def cmd_table(args, policy):
    table = sharpconst.r_constant_table(args.alphas, args.gammas, policy, jobs=args.jobs)
    header = [f"gamma {_DIMLESS}"] + [f"R(alpha={a:g}) {_DIMLESS}" for a in args.alphas]
    return header, ([g] + [cell.value for cell in row] for g, row in zip(args.gammas, table))


def cmd_spectrum(args, policy):
    spec = spectra.spectrum(spectra.parse_domain(args.domain), args.alpha, args.lambda_max, policy)
    header = ["index", f"lambda {_ENERGY}", "n", "k"]
    return header, ((i, lam, n, k) for i, (lam, n, k) in enumerate(spec.entries, start=1))


def cmd_weyl(args, policy):
    spec = spectra.spectrum(spectra.parse_domain(args.domain), args.alpha, args.lambda_max, policy)
    grid = spectra.lambda_grid(spec, args.lambda_min, args.per_decade)
    curve = spectra.weyl_quotient(spec, args.gamma, grid)
    return [f"Lambda {_ENERGY}", f"r_gamma {_DIMLESS}"], curve.samples


def cmd_branches(args, policy):
    if args.alpha_steps < 2:
        raise DomainError("need --alpha-steps >= 2")
    alphas = np.linspace(0.0, 0.5, args.alpha_steps)
    domain = spectra.parse_domain(args.domain)
    branches = spectra.eigenvalue_branches(domain, alphas, args.lambda_max, policy)
    rows = []
    for i, a in enumerate(alphas):
        for b in branches:
            if not math.isnan(b.lambdas[i]):
                rows.append((a, b.n, b.k, b.lambdas[i]))
    rows.sort(key=lambda r: (r[0], r[3], r[1], r[2]))
    return [f"alpha {_DIMLESS}", "n", "k", f"lambda {_ENERGY}"], rows


def cmd_counterexample(args, policy):
    if args.n_min > args.n_max:
        raise DomainError("need --n-min <= --n-max")
    ns = list(range(args.n_min, args.n_max + 1))
    gaps = diamag.annulus_trace_gaps(args.alpha, args.gamma, args.Lambda, args.epsilon, ns, policy)
    rows = ((n, diamag.annulus_center(n, args.gamma), g, bool(g > 0)) for n, g in zip(ns, gaps))
    header = ["n", f"r_n {_DIMLESS}", "trace_gap [L^(-2 gamma)]", "violates"]
    return header, rows


COMMANDS = {
    "density": cmd_density,
    "table": cmd_table,
    "spectrum": cmd_spectrum,
    "weyl": cmd_weyl,
    "branches": cmd_branches,
    "counterexample": cmd_counterexample,
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", default="-", help="CSV destination (default: stdout)")
    p.add_argument("--policy-file", help="key=value file overriding numeric defaults")
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--abs-tol", type=float)
    p.add_argument("--max-series-terms", type=int)
    p.add_argument("--max-quad-depth", type=int)
    p.add_argument("--root-tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abspectral",
                                     description="Spectral quantities of the Aharonov-Bohm operator as CSV.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="rho_alpha(t) and its two-term asymptotics")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, default=20.0)
    p.add_argument("--steps", type=int, default=201)
    _add_common(p)

    p = sub.add_parser("table", help="sharp constants R_gamma(alpha)")
    p.add_argument("--alphas", type=_float_list, default=list(sharpconst.CANONICAL_ALPHAS))
    p.add_argument("--gammas", type=_float_list, default=list(sharpconst.CANONICAL_GAMMAS))
    p.add_argument("--jobs", type=int, default=int(os.environ.get("ABSPECTRAL_JOBS", "1")),
                   help="worker processes (default: $ABSPECTRAL_JOBS or 1)")
    _add_common(p)

    for name, text in (("spectrum", "Dirichlet eigenvalues"), ("weyl", "Weyl quotient r_gamma(Lambda)")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--domain", required=True, help="A-E, disc:R, annulus:r1,r2 or square:h")
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--lambda-max", type=float, required=True)
        if name == "weyl":
            p.add_argument("--gamma", type=float, required=True)
            p.add_argument("--lambda-min", type=float, default=None)
            p.add_argument("--per-decade", type=int, default=400)
        _add_common(p)

    p = sub.add_parser("branches", help="low disc eigenvalues as functions of alpha in [0, 1/2]")
    p.add_argument("--alpha-steps", type=int, default=11)
    p.add_argument("--lambda-max", type=float, default=100.0)
    p.add_argument("--domain", default="A")
    _add_common(p)

    p = sub.add_parser("counterexample", help="trace gaps on the annuli around r_n")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--Lambda", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.3)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=40)
    _add_common(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        policy = build_policy(args)
        header, rows = COMMANDS[args.command](args, policy)
        rows = list(rows)
    except UnsupportedError as exc:
        print(f"abspectral: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (DomainError, RangeError, BracketError, OSError) as exc:
        print(f"abspectral: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AccuracyError, SearchError, OverflowError) as exc:
        print(f"abspectral: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.output == "-":
        write_csv(sys.stdout, header, rows)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_csv(fh, header, rows)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
