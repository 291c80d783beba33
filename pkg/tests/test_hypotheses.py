import math

import numpy as np
import pytest

from tribvp import (BoundaryCondition, Grid, HypothesisData, HypothesisFailed,
                    InvalidThresholds, ProblemSpec, RightHandSide, SamplingBox,
                    Verdict, check_problem, curvature)
from tribvp.hypotheses import (check_bound_p2, check_sign_condition,
                               compute_bounds_p1)

BOX = SamplingBox(samples=20_000, seed=0)  # smaller box keeps the suite fast


def steep_spec(n=100):
    rhs = RightHandSide(fn=lambda t, u, v: np.exp(4 * v) - np.e,
                        lower_envelope=-3.0)
    return ProblemSpec(Grid(0.01, n), curvature(), rhs, BoundaryCondition.P1)


def cosine_spec(beta, n=100):
    rhs = RightHandSide(fn=lambda t, u, v: beta * np.cos(u), bound=beta)
    return ProblemSpec(Grid(1.0, n), curvature(), rhs, BoundaryCondition.P2)


class TestSignCondition:
    def test_opposite_signs_is_sampled_only_never_pass(self):
        v = check_sign_condition(steep_spec(), 0.0, 0.5, BOX)
        assert v.status is Verdict.SAMPLED_ONLY
        assert v.ok
        assert v.samples == 2 * BOX.samples

    def test_same_sign_fails(self):
        spec = ProblemSpec(Grid(1.0, 50), curvature(),
                           RightHandSide(fn=lambda t, u, v: 1.0 + v * v),
                           BoundaryCondition.P1)
        v = check_sign_condition(spec, -1.0, 1.0, BOX)
        assert v.status is Verdict.FAIL

    def test_oscillating_sign_fails_with_caveat(self):
        spec = ProblemSpec(Grid(1.0, 50), curvature(),
                           RightHandSide(fn=lambda t, u, v: np.sin(3 * v)),
                           BoundaryCondition.P1)
        v = check_sign_condition(spec, -1.0, 1.0, BOX)
        assert v.status is Verdict.FAIL
        # only the pointwise sufficient condition is refuted by a sample
        assert "integral form" in v.detail
        assert v.counterexample is not None

    def test_thresholds_must_be_ordered(self):
        with pytest.raises(InvalidThresholds):
            check_sign_condition(steep_spec(), 0.5, 0.5, BOX)
        with pytest.raises(InvalidThresholds):
            check_sign_condition(steep_spec(), 1.0, -1.0, BOX)

    def test_deterministic_for_fixed_seed(self):
        a = check_sign_condition(steep_spec(), 0.0, 0.5, BOX)
        b = check_sign_condition(steep_spec(), 0.0, 0.5, BOX)
        assert a == b


class TestBoundsP1:
    def test_flagship_constants(self):
        rep = compute_bounds_p1(steep_spec(), 0.0, 0.5, -3.0, BOX)
        assert rep.passed
        # L = phi(1/2) = 1/sqrt(5) for the curvature flux
        assert rep.L == pytest.approx(1 / math.sqrt(5), abs=1e-12)
        assert rep.c_minus_l1 == pytest.approx(0.03, abs=1e-12)
        assert rep.r == pytest.approx(0.5885374805, abs=1e-9)
        assert rep.rho_min == pytest.approx(rep.r * 2.01, abs=1e-12)
        lo, hi = rep.kappa_range
        assert lo == pytest.approx(rep.L + 0.06, abs=1e-12)
        assert hi == 1.0
        assert rep.verdicts["width"].status is Verdict.PASS
        assert rep.verdicts["envelope"].status is Verdict.SAMPLED_ONLY

    def test_envelope_violation_reports_counterexample(self):
        spec = ProblemSpec(Grid(1.0, 50), curvature(),
                           RightHandSide(fn=lambda t, u, v: v),
                           BoundaryCondition.P1)
        rep = compute_bounds_p1(spec, -1.0, 1.0, -1.0, BOX)
        bad = rep.verdicts["envelope"]
        assert bad.status is Verdict.FAIL
        t, x, y = bad.counterexample
        assert y < -1.0  # the sampled slope that dipped below the envelope

    def test_width_failure_from_negative_envelope_mass(self):
        # the flux bound alone keeps L < a, so only the envelope's negative
        # part can sink the width inequality: 2 * 30 * 0.01 = 0.6 pushes the
        # threshold to 1.047 >= 1
        rep = compute_bounds_p1(steep_spec(), 0.0, 0.5, -30.0, BOX)
        assert rep.verdicts["width"].status is Verdict.FAIL
        assert rep.r is None and rep.kappa_range is None

    def test_callable_envelope(self):
        rep = compute_bounds_p1(steep_spec(), 0.0, 0.5,
                                lambda t: -3.0 + 0.0 * t, BOX)
        assert rep.c_minus_l1 == pytest.approx(0.03, abs=1e-12)


class TestBoundP2:
    def test_asserted_bound_passes_and_is_certified(self):
        rep = check_bound_p2(cosine_spec(0.4), 0.4, BOX)
        v = rep.verdicts["bound"]
        assert v.status is Verdict.PASS  # arithmetic comparison, certified
        assert "0.4 < 0.5" in v.detail
        assert rep.L == pytest.approx(4.0 / 3.0, abs=1e-12)
        assert rep.solution_bound == pytest.approx(4.0, abs=1e-12)
        assert rep.verdicts["bound_consistency"].status is Verdict.SAMPLED_ONLY

    def test_asserted_bound_fails_at_limit(self):
        rep = check_bound_p2(cosine_spec(0.6), 0.6, BOX)
        assert rep.verdicts["bound"].status is Verdict.FAIL
        assert not rep.passed

    def test_lying_assertion_is_caught_by_sampling(self):
        spec = cosine_spec(0.45)
        rep = check_bound_p2(spec, 0.1, BOX)  # |f| actually reaches 0.45
        assert rep.verdicts["bound"].status is Verdict.PASS
        assert rep.verdicts["bound_consistency"].status is Verdict.FAIL
        assert not rep.passed

    def test_without_assertion_everything_is_sampled(self):
        rep = check_bound_p2(cosine_spec(0.4), None, BOX)
        v = rep.verdicts["bound"]
        assert v.status is Verdict.SAMPLED_ONLY
        assert rep.solution_bound is not None


class TestCheckProblem:
    def test_p1_merges_all_verdicts(self):
        data = HypothesisData(m1=0.0, m2=0.5, c_lower=-3.0, kappa=0.9, rho=1.2)
        rep = check_problem(steep_spec(), data, BOX)
        assert set(rep.verdicts) == {"sign", "envelope", "width",
                                     "kappa_in_range", "rho_in_range"}
        assert rep.passed

    def test_kappa_rho_out_of_range_fail(self):
        data = HypothesisData(m1=0.0, m2=0.5, c_lower=-3.0, kappa=0.4, rho=0.5)
        rep = check_problem(steep_spec(), data, BOX)
        assert rep.verdicts["kappa_in_range"].status is Verdict.FAIL
        assert rep.verdicts["rho_in_range"].status is Verdict.FAIL

    def test_missing_data_raises(self):
        with pytest.raises(HypothesisFailed, match="insufficient data"):
            check_problem(steep_spec(), HypothesisData(), BOX)

    def test_p2_dispatch(self):
        rep = check_problem(cosine_spec(0.4), HypothesisData(c_bound=0.4), BOX)
        assert rep.passed
        assert rep.bc_case is BoundaryCondition.P2
