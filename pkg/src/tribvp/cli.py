"""Command line front end: solve / check / degree over INI problem files.

Exit codes are part of the interface and disjoint by construction:

    0   success (solve converged / all checks passed / degree nonzero)
    1   check found a failing condition, or the degree is zero
    2   no convergence (solve) or an uncertifiable boundary (degree)
    3   hypothesis hard-failure under --require-hypotheses, or seeding failure
    4   unreadable input: file, expression, or option errors
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .degree import degree_for_problem
from .errors import (EmptyDomain, HypothesisFailed, NoConvergence, NoRoot,
                     PreconditionViolated, ProblemFileError, RangeViolation,
                     RefinementExhausted, StepRejected, ZeroOnBoundary)
from .hypotheses import SamplingBox, check_problem
from .operators import BoundaryCondition, nemytskii
from .problem_file import load_problem
from .solver import solve

__all__ = ["main", "entry"]

CSV_HEADER = "t,u,du,phi_du,f"


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ProblemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tribvp",
        description="Solve, check, and certify three-point boundary value "
                    "problems with a bounded flux nonlinearity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file, emit CSV")
    p_solve.add_argument("file")
    p_solve.add_argument("--out", default=None, help="write the CSV here "
                         "instead of stdout")
    p_solve.add_argument("--backend", default=None,
                         choices=["fixed-point", "shooting", "both"])
    p_solve.add_argument("--require-hypotheses", action="store_true",
                         help="refuse to solve unless the hypothesis report "
                              "has no failing condition")
    p_solve.set_defaults(handler=_run_solve)

    p_check = sub.add_parser("check", help="run the hypothesis checker")
    p_check.add_argument("file")
    p_check.add_argument("--seed", type=int, default=0,
                         help="seed for the sampling sequence")
    p_check.set_defaults(handler=_run_check)

    p_deg = sub.add_parser("degree", help="topological degree of the reduced "
                           "plane map on a disk-with-walls domain")
    p_deg.add_argument("file")
    p_deg.add_argument("--rho", type=float, required=True)
    p_deg.add_argument("--kappa", type=float, required=True)
    p_deg.add_argument("--samples", type=int, default=512)
    p_deg.set_defaults(handler=_run_degree)
    return parser


# -------------------------------------------------------------------- solve

def _run_solve(args) -> int:
    doc = load_problem(args.file)
    opts = doc.options
    if args.backend is not None:
        opts = replace(opts, backend=args.backend)

    if args.require_hypotheses:
        try:
            report = check_problem(doc.spec, doc.hypothesis_data)
        except HypothesisFailed as exc:
            print(f"hypotheses: {exc}", file=sys.stderr)
            return 3
        if not report.passed:
            for name, verdict in report.verdicts.items():
                if not verdict.ok:
                    print(f"hypotheses: {name}: {verdict.detail}",
                          file=sys.stderr)
            return 3
        bound = report.rho_min if report.rho_min is not None else report.solution_bound
        if bound is not None and opts.apriori_bound is None:
            opts = replace(opts, apriori_bound=bound)

    try:
        result = solve(doc.spec, opts)
    except HypothesisFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NoConvergence as exc:
        print(_summary("fail", exc.best_residual, exc.iterations, opts.backend))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoRoot, StepRejected, RangeViolation, PreconditionViolated) as exc:
        print(_summary("fail", float("nan"), 0, opts.backend))
        print(f"error: {exc}", file=sys.stderr)
        return 2

    table = _csv_table(doc.spec, result.solution)
    if args.out is not None:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as handle:
                handle.write(table)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 4
    else:
        sys.stdout.write(table)
    if result.disagreement_flagged:
        print(f"warning: backends disagree by {result.backend_agreement:.6g} "
              f"(over 100x the tolerance)", file=sys.stderr)
    print(_summary("ok", result.residuals.c1, result.iterations, result.backend))
    return 0


def _summary(status: str, residual: float, iters: int, backend: str) -> str:
    return (f"status={status} residual={residual:.6e} "
            f"iters={iters} backend={backend}")


def _csv_table(spec, u) -> str:
    t = spec.grid.nodes
    f_vals = nemytskii(spec, u)
    phi_du = spec.phi.forward(u.derivs)
    lines = [CSV_HEADER]
    for row in zip(t, u.values, u.derivs, np.atleast_1d(phi_du), f_vals):
        lines.append(",".join(f"{value:.17g}" for value in row))
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- check

def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _run_check(args) -> int:
    doc = load_problem(args.file)
    box = SamplingBox(seed=args.seed)
    try:
        report = check_problem(doc.spec, doc.hypothesis_data, box)
    except HypothesisFailed as exc:
        print(f"fail: {exc}")
        return 1
    for name, verdict in report.verdicts.items():
        line = f"{name}: {verdict.status.value} - {verdict.detail}"
        if verdict.counterexample is not None:
            t, x, y = verdict.counterexample
            line += f" at (t, x, y) = ({t:.6g}, {x:.6g}, {y:.6g})"
        print(line)
    for label, value in (("M1", report.m1), ("M2", report.m2),
                         ("L", report.L), ("r", report.r),
                         ("||c-||_1", report.c_minus_l1),
                         ("c_bound", report.c_bound),
                         ("solution_bound", report.solution_bound),
                         ("rho_min", report.rho_min)):
        if value is not None:
            print(f"{label}={_fmt(value)}")
    if report.kappa_range is not None:
        lo, hi = report.kappa_range
        print(f"kappa_range=({_fmt(lo)}, {_fmt(hi)})")
    return 0 if report.passed else 1


# ------------------------------------------------------------------- degree

def _run_degree(args) -> int:
    doc = load_problem(args.file)
    if doc.spec.bc is BoundaryCondition.P2:
        print("error: the plane reduction applies to the slope-anchored "
              "cases only (bc = p1 or p1t)", file=sys.stderr)
        return 4
    try:
        result = degree_for_problem(doc.spec, rho=args.rho, kappa=args.kappa,
                                    m=args.samples)
    except (EmptyDomain, PreconditionViolated, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ZeroOnBoundary as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RefinementExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"degree={result.degree} "
          f"min_boundary_norm={result.min_boundary_norm:.10g} "
          f"samples={result.samples_used}")
    return 0 if result.degree != 0 else 1
