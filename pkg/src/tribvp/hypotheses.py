"""Solvability hypotheses: sampled checks and the a priori constants.

Two kinds of verdict are possible and the distinction is kept explicit.
Arithmetic facts about user-supplied constants (a width inequality, a bound
comparison) are certified and may carry PASS.  Anything established by probing
f at finitely many points is at best SAMPLED_ONLY and never upgrades: a clean
sample of a sign condition is evidence, not proof.

For the slope-anchored conditions (p1/p1t) the checked hypothesis set is

  * sign:      f has one strict sign for slopes y >= M2 and the opposite
               strict sign for y <= M1 (a pointwise sufficient version of the
               mean-value condition the solver's seeding relies on);
  * envelope:  f(t, x, y) >= c(t) for a supplied lower envelope c;
  * width:     L + 2 * ||c^-||_1 < a, where L = max(|phi(M2)|, |phi(M1)|).

On success the checker also reports the slope bound r (flux inverse of the
width threshold), the solution-norm bound r * (2 + T), and the admissible
(kappa, rho) ranges for degree domains.

For p2 the hypothesis is a global bound |f| <= c with c < a / (2 T); then
slopes obey |phi(u')| <= 2 c T and the solution norm is bounded by
L * (2 + T) with L = phi^{-1}(2 c T).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .errors import HypothesisFailed, InvalidThresholds
from .grid import integrate
from .operators import BoundaryCondition, ProblemSpec

__all__ = [
    "Verdict", "ConditionVerdict", "SamplingBox", "HypothesisData",
    "HypothesisReport", "check_sign_condition", "compute_bounds_p1",
    "check_bound_p2", "check_problem",
]


class Verdict(enum.Enum):
    PASS = "pass"                  # certified arithmetic fact
    FAIL = "fail"
    SAMPLED_ONLY = "sampled-only"  # held on every sample; not a proof


@dataclass(frozen=True)
class ConditionVerdict:
    status: Verdict
    detail: str
    samples: int = 0
    counterexample: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.status is not Verdict.FAIL


@dataclass(frozen=True)
class SamplingBox:
    """Where f gets probed: t in [0, T] always, x and y in finite boxes."""

    x_halfwidth: float = 10.0
    y_span: float = 10.0
    samples: int = 100_000
    seed: int = 0


@dataclass(frozen=True)
class HypothesisData:
    """User-supplied hypothesis constants, all optional."""

    m1: float | None = None
    m2: float | None = None
    c_lower: Callable | float | None = None
    c_bound: float | None = None
    kappa: float | None = None
    rho: float | None = None


@dataclass(frozen=True)
class HypothesisReport:
    bc_case: BoundaryCondition
    verdicts: dict[str, ConditionVerdict] = field(default_factory=dict)
    m1: float | None = None
    m2: float | None = None
    c_minus_l1: float | None = None
    L: float | None = None
    r: float | None = None
    rho_min: float | None = None
    kappa_range: tuple[float, float] | None = None
    c_bound: float | None = None
    solution_bound: float | None = None

    @property
    def passed(self) -> bool:
        return bool(self.verdicts) and all(v.ok for v in self.verdicts.values())

    @property
    def sample_counts(self) -> dict[str, int]:
        return {name: v.samples for name, v in self.verdicts.items() if v.samples}


def _quasi_random(count: int, dim: int, seed: int) -> np.ndarray:
    return qmc.Halton(d=dim, scramble=True, seed=seed).random(count)


def _probe(spec: ProblemSpec, box: SamplingBox, y_lo: float, y_hi: float,
           seed_shift: int) -> tuple[np.ndarray, ...]:
    pts = _quasi_random(box.samples, 3, box.seed + seed_shift)
    t = pts[:, 0] * spec.grid.T
    x = (2.0 * pts[:, 1] - 1.0) * box.x_halfwidth
    y = y_lo + pts[:, 2] * (y_hi - y_lo)
    with np.errstate(all="ignore"):
        f = np.broadcast_to(np.asarray(spec.rhs.fn(t, x, y), dtype=float),
                            t.shape).astype(float)
    return t, x, y, f


def _strict_sign(f: np.ndarray) -> int:
    """+1 / -1 when every entry has that strict sign, else 0."""
    if np.all(f > 0.0):
        return 1
    if np.all(f < 0.0):
        return -1
    return 0


def check_sign_condition(spec: ProblemSpec, m1: float, m2: float,
                         box: SamplingBox = SamplingBox()) -> ConditionVerdict:
    """Sampled check that f has opposite strict signs beyond the thresholds.

    A counterexample here only disproves the pointwise form; an f that
    satisfies the weaker mean-value condition without pointwise sign control
    is reported as a failure with that caveat in the detail text.
    """
    if not m1 < m2:
        raise InvalidThresholds(f"need M1 < M2, got M1={m1!r} M2={m2!r}")
    t_hi, x_hi, y_hi, f_hi = _probe(spec, box, m2, m2 + box.y_span, seed_shift=1)
    t_lo, x_lo, y_lo, f_lo = _probe(spec, box, m1 - box.y_span, m1, seed_shift=2)
    total = 2 * box.samples

    for name, (t, x, y, f) in (("y >= M2", (t_hi, x_hi, y_hi, f_hi)),
                               ("y <= M1", (t_lo, x_lo, y_lo, f_lo))):
        if not np.isfinite(f).all():
            j = int(np.argmin(np.isfinite(f)))
            return ConditionVerdict(
                Verdict.FAIL, f"f not finite on {name}", total,
                (float(t[j]), float(x[j]), float(y[j])))
        if _strict_sign(f) == 0:
            j = int(np.argmin(np.abs(f)))
            return ConditionVerdict(
                Verdict.FAIL,
                f"no strict constant sign on {name} (pointwise condition "
                "violated; the integral form remains undetermined)",
                total, (float(t[j]), float(x[j]), float(y[j])))
    if _strict_sign(f_hi) == _strict_sign(f_lo):
        return ConditionVerdict(
            Verdict.FAIL,
            "same strict sign on both slope ranges; opposite signs required",
            total)
    return ConditionVerdict(
        Verdict.SAMPLED_ONLY,
        f"opposite strict signs across the thresholds on {total} samples",
        total)


def _width_constants(spec: ProblemSpec, m1: float, m2: float,
                     c_minus_l1: float) -> dict:
    phi = spec.phi
    L = max(abs(phi.forward(m2)), abs(phi.forward(m1)))
    threshold = L + 2.0 * c_minus_l1
    out = {"L": L, "threshold": threshold, "r": None, "rho_min": None,
           "kappa_range": None}
    if threshold < phi.a:
        r = max(abs(phi.inverse(threshold)), abs(phi.inverse(-threshold)))
        out["r"] = r
        out["rho_min"] = r * (2.0 + spec.grid.T)
        out["kappa_range"] = (threshold, phi.a)
    return out


def compute_bounds_p1(spec: ProblemSpec, m1: float, m2: float,
                      c_lower: Callable | float,
                      box: SamplingBox = SamplingBox()) -> HypothesisReport:
    """Envelope check plus the a priori constants for the p1/p1t case."""
    if not m1 < m2:
        raise InvalidThresholds(f"need M1 < M2, got M1={m1!r} M2={m2!r}")
    if c_lower is None:
        raise HypothesisFailed("insufficient data: a lower envelope c(t) is required")
    grid = spec.grid
    c_fn = c_lower if callable(c_lower) else (lambda t, c=float(c_lower): np.full(np.shape(t), c))

    t, x, y, f = _probe(spec, box, -box.y_span + min(0.0, m1),
                        box.y_span + max(0.0, m2), seed_shift=3)
    c_at = np.broadcast_to(np.asarray(c_fn(t), dtype=float), t.shape).astype(float)
    verdicts: dict[str, ConditionVerdict] = {}
    bad = f < c_at
    if bad.any():
        j = int(np.argmax(bad))
        verdicts["envelope"] = ConditionVerdict(
            Verdict.FAIL,
            f"f = {f[j]:.6g} dips below c = {c_at[j]:.6g}",
            box.samples, (float(t[j]), float(x[j]), float(y[j])))
    else:
        verdicts["envelope"] = ConditionVerdict(
            Verdict.SAMPLED_ONLY,
            f"f >= c(t) on {box.samples} samples", box.samples)

    c_nodes = np.broadcast_to(np.asarray(c_fn(grid.nodes), dtype=float),
                              grid.nodes.shape).astype(float)
    c_minus_l1 = integrate(grid, np.maximum(-c_nodes, 0.0))
    consts = _width_constants(spec, m1, m2, c_minus_l1)
    if consts["threshold"] < spec.phi.a:
        verdicts["width"] = ConditionVerdict(
            Verdict.PASS,
            f"L + 2||c-||_1 = {consts['threshold']:.10g} < a = {spec.phi.a:.10g}")
    else:
        verdicts["width"] = ConditionVerdict(
            Verdict.FAIL,
            f"L + 2||c-||_1 = {consts['threshold']:.10g} >= a = {spec.phi.a:.10g}; "
            "no admissible slope bound exists")
    return HypothesisReport(
        bc_case=spec.bc, verdicts=verdicts, m1=m1, m2=m2,
        c_minus_l1=c_minus_l1, L=consts["L"], r=consts["r"],
        rho_min=consts["rho_min"], kappa_range=consts["kappa_range"])


def check_bound_p2(spec: ProblemSpec, c_bound: float | None = None,
                   box: SamplingBox = SamplingBox()) -> HypothesisReport:
    """Bound check c < a / (2T) for the p2 case.

    With a user-asserted global bound the comparison is certified (and the
    assertion itself is spot-checked by sampling).  Without one, the empirical
    max of |f| over the box stands in for c and everything is sampled-only.
    """
    grid = spec.grid
    phi = spec.phi
    limit = phi.a / (2.0 * grid.T)
    t, x, y, f = _probe(spec, box, -box.y_span, box.y_span, seed_shift=4)
    finite = np.isfinite(f)
    verdicts: dict[str, ConditionVerdict] = {}
    if not finite.all():
        j = int(np.argmin(finite))
        verdicts["bound"] = ConditionVerdict(
            Verdict.FAIL, "f not finite on the sampling box", box.samples,
            (float(t[j]), float(x[j]), float(y[j])))
        return HypothesisReport(bc_case=spec.bc, verdicts=verdicts, c_bound=c_bound)
    emp_max = float(np.abs(f).max())

    if c_bound is not None:
        c_eff = float(c_bound)
        if c_eff < limit:
            verdicts["bound"] = ConditionVerdict(
                Verdict.PASS, f"{c_eff:.10g} < {limit:.10g}")
        else:
            verdicts["bound"] = ConditionVerdict(
                Verdict.FAIL, f"{c_eff:.10g} >= {limit:.10g}")
        if emp_max > c_eff:
            j = int(np.argmax(np.abs(f)))
            verdicts["bound_consistency"] = ConditionVerdict(
                Verdict.FAIL,
                f"sampled |f| reached {emp_max:.6g}, above the asserted bound",
                box.samples, (float(t[j]), float(x[j]), float(y[j])))
        else:
            verdicts["bound_consistency"] = ConditionVerdict(
                Verdict.SAMPLED_ONLY,
                f"max sampled |f| = {emp_max:.6g} within the asserted bound",
                box.samples)
    else:
        c_eff = emp_max
        status = Verdict.SAMPLED_ONLY if c_eff < limit else Verdict.FAIL
        verdicts["bound"] = ConditionVerdict(
            status,
            f"max sampled |f| = {c_eff:.10g} vs limit {limit:.10g}",
            box.samples)

    L = None
    solution_bound = None
    if c_eff < limit:
        cap = 2.0 * c_eff * grid.T
        L = max(abs(phi.inverse(cap)), abs(phi.inverse(-cap)))
        solution_bound = L * (2.0 + grid.T)
    return HypothesisReport(
        bc_case=spec.bc, verdicts=verdicts, c_bound=c_eff, L=L,
        solution_bound=solution_bound)


def check_problem(spec: ProblemSpec, data: HypothesisData,
                  box: SamplingBox = SamplingBox()) -> HypothesisReport:
    """Full hypothesis report for a problem, dispatching on its boundary case."""
    if spec.bc is BoundaryCondition.P2:
        report = check_bound_p2(spec, data.c_bound, box)
    else:
        if data.m1 is None or data.m2 is None or data.c_lower is None:
            raise HypothesisFailed(
                "insufficient data: the slope-anchored cases need M1, M2 and "
                "a lower envelope c(t)")
        report = compute_bounds_p1(spec, data.m1, data.m2, data.c_lower, box)
        verdicts = dict(report.verdicts)
        sign = check_sign_condition(spec, data.m1, data.m2, box)
        verdicts = {"sign": sign, **verdicts}
        report = HypothesisReport(
            bc_case=report.bc_case, verdicts=verdicts, m1=report.m1,
            m2=report.m2, c_minus_l1=report.c_minus_l1, L=report.L,
            r=report.r, rho_min=report.rho_min, kappa_range=report.kappa_range)

    verdicts = dict(report.verdicts)
    if data.kappa is not None and report.kappa_range is not None:
        lo, hi = report.kappa_range
        ok = lo < data.kappa < hi
        verdicts["kappa_in_range"] = ConditionVerdict(
            Verdict.PASS if ok else Verdict.FAIL,
            f"kappa = {data.kappa:.10g} vs admissible ({lo:.10g}, {hi:.10g})")
    if data.rho is not None and report.rho_min is not None:
        ok = data.rho > report.rho_min
        verdicts["rho_in_range"] = ConditionVerdict(
            Verdict.PASS if ok else Verdict.FAIL,
            f"rho = {data.rho:.10g} vs minimum {report.rho_min:.10g}")
    return HypothesisReport(
        bc_case=report.bc_case, verdicts=verdicts, m1=report.m1,
        m2=report.m2, c_minus_l1=report.c_minus_l1, L=report.L,
        r=report.r, rho_min=report.rho_min, kappa_range=report.kappa_range,
        c_bound=report.c_bound, solution_bound=report.solution_bound)
