import json
import math

import numpy as np
import pytest

from abcfrac.errors import HypothesisViolation, PreconditionUnmet
from abcfrac.inequality_lab import (
    ComparisonPair,
    PropertyReport,
    StrictSide,
    check_max_point_estimate,
    check_maximal_domination,
    check_min_point_estimate,
    check_ml_growth_bound,
    check_ml_self_growth,
    check_nonstrict_comparison,
    check_periodic_comparison,
    check_prabhakar_growth_inequality,
    check_strict_comparison,
    check_zero_crossing_max,
    check_zero_crossing_min,
    prabhakar_lemma_discrepancy,
    reports_to_json,
    run_suite,
    suite_passed,
)
from abcfrac.operators import DifferentiableInput as D
from abcfrac.operators import Normalization, Trajectory, UniformGrid, abc_derivative
from abcfrac.solver import IVProblem, RhsFunction, SolverConfig, solve_ivp

A = 0.5
B = Normalization()
K = B(A) / (1 - A)
H = 2e-3
GRID = UniformGrid.over(1.0, H)
GRID2 = UniformGrid.over(2.0, H)
const = D.constant


def test_report_invariant_and_json():
    r = PropertyReport("x", True, -1.0, 0.5, 0.1, "n")
    assert set(r.to_dict()) == {"property_name", "passed", "worst_violation", "violation_location", "tolerance_used", "notes"}
    with pytest.raises(ValueError):
        PropertyReport("x", True, 1.0, 0.5, 0.1)
    exp = PropertyReport("y", False, 1.0, 0.0, 0.1, "n", experimental=True)
    assert exp.to_dict()["notes"].startswith("[EXPERIMENTAL]")
    assert json.loads(reports_to_json([r, exp]))[1]["passed"] is False


class TestZeroCrossing:
    def test_max_linear(self):
        r = check_zero_crossing_max(D(lambda t: t - 1, lambda t: 1.0), 1.0, A, B, GRID2)
        assert r.passed and r.violation_location == pytest.approx(1.0)
        # D of tau - 1 equals D of tau = 2 E_{1/2,2}(-1)
        assert r.worst_violation == pytest.approx(-1.1119254865, abs=1e-4)

    def test_max_quadratic_and_zero(self):
        assert check_zero_crossing_max(D(lambda t: -((t - 1) ** 2), lambda t: -2 * (t - 1)), 1.0, A, B, GRID2).passed
        r = check_zero_crossing_max(const(0.0), 0.5, A, B, GRID)
        assert r.passed and r.worst_violation == 0.0

    def test_min_mirror(self):
        r = check_zero_crossing_min(D(lambda t: 1 - t, lambda t: -1.0), 1.0, A, B, GRID2)
        assert r.passed
        assert check_zero_crossing_min(D(lambda t: (t - 1) ** 2, lambda t: 2 * (t - 1)), 1.0, A, B, GRID2).passed

    def test_duality(self):
        m = D(lambda t: -math.sin(math.pi * t / 2) ** 2 * (t - 1) ** 2, None)
        r_min = check_zero_crossing_min(-m, 1.0, A, B, GRID2)
        r_max = check_zero_crossing_max(m, 1.0, A, B, GRID2)
        assert abs(r_min.worst_violation) == pytest.approx(abs(r_max.worst_violation), abs=1e-12)

    def test_preconditions(self):
        with pytest.raises(PreconditionUnmet):
            check_zero_crossing_max(D(lambda t: 1 - t, lambda t: -1.0), 1.0, A, B, GRID2)
        with pytest.raises(PreconditionUnmet):
            check_zero_crossing_max(D(lambda t: t - 0.5, lambda t: 1.0), 1.0, A, B, GRID2)
        with pytest.raises(PreconditionUnmet):
            check_zero_crossing_max(const(0.0), 0.0, A, B, GRID)
        with pytest.raises(PreconditionUnmet):
            check_zero_crossing_min(D(lambda t: t - 1, lambda t: 1.0), 1.0, A, B, GRID2)


class TestExtremePoints:
    def test_sine_maximizer_at_end(self):
        f = D(lambda t: math.sin(math.pi * t / 2), lambda t: math.pi / 2 * math.cos(math.pi * t / 2))
        r = check_max_point_estimate(f, A, B, GRID)
        assert r.passed and r.violation_location == pytest.approx(1.0)

    def test_parabola_interior(self):
        r = check_max_point_estimate(D(lambda t: -((t - 0.5) ** 2), lambda t: -2 * (t - 0.5)), A, B, GRID)
        assert r.passed and r.violation_location == pytest.approx(0.5)

    def test_constant_ties_to_smallest_tau(self):
        r = check_max_point_estimate(const(2.0), A, B, GRID)
        assert r.violation_location == 0.0 and r.worst_violation == 0.0
        assert check_min_point_estimate(const(2.0), A, B, GRID).violation_location == 0.0

    def test_min_mirror(self):
        r = check_min_point_estimate(D(lambda t: (t - 0.5) ** 2, lambda t: 2 * (t - 0.5)), A, B, GRID)
        assert r.passed and r.violation_location == pytest.approx(0.5)

    def test_tau0_not_extremizer(self):
        with pytest.raises(PreconditionUnmet):
            check_max_point_estimate(D(math.sin, math.cos), A, B, GRID, tau0=0.0)


class TestComparison:
    def test_strict(self):
        pair = ComparisonPair(const(0.0), D(lambda t: 2 + t, lambda t: 1.0), lambda t, w: t + 1 - w)
        r = check_strict_comparison(pair, A, B, GRID)
        assert r.passed and r.tolerance_used < 0 and "lower" in r.notes

    def test_strict_perturbed_constant(self):
        pair = ComparisonPair(const(0.99), const(1.0), lambda t, w: 0.1 * (1 - w), StrictSide.LOWER_STRICT)
        assert check_strict_comparison(pair, A, B, GRID).passed

    def test_strict_preconditions(self):
        with pytest.raises(PreconditionUnmet):
            check_strict_comparison(ComparisonPair(const(1.0), const(1.0), lambda t, w: 0.0), A, B, GRID)
        # neither side strict
        with pytest.raises(PreconditionUnmet):
            check_strict_comparison(ComparisonPair(const(0.0), const(1.0), lambda t, w: 0.0), A, B, GRID)
        with pytest.raises(PreconditionUnmet):
            pair = ComparisonPair(const(0.0), const(1.0), lambda t, w: -1.0, StrictSide.UPPER_STRICT)
            check_strict_comparison(pair, A, B, GRID)

    def test_nonstrict(self):
        pair = ComparisonPair(const(0.0), D(lambda t: 1 + t, lambda t: 1.0), lambda t, w: -0.5 * K * w)
        r = check_nonstrict_comparison(pair, 0.5 * K, A, B, GRID)
        assert r.passed and "inflation eps=0.01" in r.notes and "inflation eps=0.001" in r.notes

    def test_nonstrict_equal(self):
        r = check_nonstrict_comparison(ComparisonPair(const(1.0), const(1.0), lambda t, w: 0.0), 0.5 * K, A, B, GRID)
        assert r.passed and r.worst_violation == 0.0

    def test_nonstrict_L_range(self):
        pair = ComparisonPair(const(1.0), const(1.0), lambda t, w: 0.0)
        with pytest.raises(HypothesisViolation):
            check_nonstrict_comparison(pair, K, A, B, GRID)
        with pytest.raises(HypothesisViolation):
            check_nonstrict_comparison(pair, 0.0, A, B, GRID)

    def test_nonstrict_lipschitz_sampled(self):
        pair = ComparisonPair(const(0.0), const(1.0), lambda t, w: 1.9 * w * 0)
        check_nonstrict_comparison(pair, 1.0, A, B, GRID)
        bad = ComparisonPair(const(0.0), const(0.0), lambda t, w: 1.9 * w)
        with pytest.raises(PreconditionUnmet):
            check_nonstrict_comparison(bad, 1.0, A, B, GRID)

    def test_periodic(self):
        r = check_periodic_comparison(ComparisonPair(const(0.0), const(1.0), lambda t, w: -w), A, B, GRID)
        assert r.passed and r.experimental and r.to_dict()["notes"].startswith("[EXPERIMENTAL]")
        with pytest.raises(PreconditionUnmet):
            check_periodic_comparison(ComparisonPair(const(0.0), const(1.0), lambda t, w: w), A, B, GRID)


class TestGrowth:
    def test_constant_and_zero(self):
        assert check_ml_growth_bound(Trajectory(GRID, np.full(GRID.n_nodes, 3.0)), 3.0, A).passed
        assert check_ml_growth_bound(Trajectory(GRID, np.zeros(GRID.n_nodes)), 0.0, A).passed

    def solver_fixture(self, c):
        rhs = RhsFunction(lambda t, w: c * K * w * t, 0.0, c * K, 10.0, 10.0)
        m = solve_ivp(IVProblem(rhs, 1.0, 1.0, A), SolverConfig(H))
        return m, abc_derivative(m, A).values

    @pytest.mark.parametrize("c", [0.2, 0.3, 0.5])
    def test_solver_fixture_satisfies_bound(self, c):
        m, d = self.solver_fixture(c)
        assert check_ml_growth_bound(m, 1.0, A, abc_values=d).passed

    def test_original_fixture_is_a_counterexample(self):
        # coefficient 0.9: hypothesis holds with room to spare, bound fails badly
        m, d = self.solver_fixture(0.9)
        assert np.max(d - K * m.values) < 0
        r = check_ml_growth_bound(m, 1.0, A, abc_values=d)
        assert not r.passed and r.worst_violation > 1.0

    def test_exponential_counterexample(self):
        vals = np.exp(5 * GRID.nodes)
        d = abc_derivative(D(lambda t: math.exp(5 * t), lambda t: 5 * math.exp(5 * t)), A, B, GRID).values
        assert np.max(d - K * vals) < 0
        r = check_ml_growth_bound(Trajectory(GRID, vals), 1.0, A, abc_values=d)
        assert not r.passed

    def test_hypothesis_checked_when_given(self):
        # early descent makes D m exceed K m later on
        m = Trajectory(GRID, 1.0 - 5.0 * GRID.nodes)
        d = abc_derivative(m, A).values
        with pytest.raises(PreconditionUnmet):
            check_ml_growth_bound(m, 1.0, A, abc_values=d)

    def test_prabhakar_inequality(self):
        assert check_prabhakar_growth_inequality(A, GRID).passed
        r = check_prabhakar_growth_inequality(A, GRID, np.linspace(0, 5, 100))
        assert r.passed and "True" in r.notes
        zero = check_prabhakar_growth_inequality(A, GRID, [0.0])
        assert zero.worst_violation == 0.0
        with pytest.raises(PreconditionUnmet):
            check_prabhakar_growth_inequality(A, GRID, [-0.1])

    def test_self_growth_claim_fails(self):
        r = check_ml_self_growth(A, B, GRID)
        assert r.experimental and not r.passed
        assert r.violation_location >= GRID.step_h

    def test_prabhakar_lemma_lambda(self):
        lam = -A / (1 - A)
        assert prabhakar_lemma_discrepancy(A, 2.0, 0.0, lam, B, UniformGrid.over(1.0, 1e-3)).passed
        assert not prabhakar_lemma_discrepancy(A, 2.0, 0.0, 1.0, B, UniformGrid.over(1.0, 1e-3)).passed


class TestDomination:
    def test_constant(self):
        cfg = SolverConfig(1e-2)
        r = check_maximal_domination(const(0.5), RhsFunction(lambda t, u: 0.0), 0.5, A, B, cfg, 1.0)
        assert r.passed and abs(r.worst_violation) < 1e-6

    def test_solver_trajectory(self):
        cfg = SolverConfig(1e-2)
        f = RhsFunction(lambda t, w: t * math.cos(w), 1.0, 1.0, 1.0, 1.0)
        m = solve_ivp(IVProblem(f, 0.5, 1.0, A), cfg)
        g = RhsFunction(lambda t, u: t, 1.0, 0.0, 1.0, 1.0)
        assert check_maximal_domination(m, g, 1.0, A, B, cfg).passed

    def test_preconditions(self):
        cfg = SolverConfig(1e-2)
        with pytest.raises(PreconditionUnmet):
            check_maximal_domination(const(2.0), RhsFunction(lambda t, u: 0.0), 1.0, A, B, cfg, 1.0)
        with pytest.raises(PreconditionUnmet):
            check_maximal_domination(D(lambda t: t, lambda t: 1.0), RhsFunction(lambda t, u: 0.0), 1.0, A, B, cfg, 1.0)


@pytest.fixture(scope="module")
def reports():
    return run_suite(h=H)


class TestSuite:
    def test_sorted_and_green(self, reports):
        names = [r.property_name for r in reports]
        assert names == sorted(names)
        assert suite_passed(reports)

    def test_every_check_has_negative_control(self, reports):
        names = {r.property_name for r in reports}
        for check in (
            "zero_crossing_max",
            "zero_crossing_min",
            "max_point_estimate",
            "min_point_estimate",
            "strict_comparison",
            "nonstrict_comparison",
            "ml_growth_bound",
            "prabhakar_growth_inequality",
            "periodic_comparison",
            "maximal_domination",
        ):
            assert f"negative_control/{check}" in names
        for r in reports:
            if r.property_name.startswith("negative_control/"):
                assert r.passed and "PreconditionUnmet" in r.notes

    def test_experimental_failures_are_documented(self, reports):
        failing = [r for r in reports if not r.passed]
        assert failing and all(r.experimental for r in failing)

    def test_tolerance_scales_with_h(self):
        coarse = {r.property_name: r for r in run_suite(h=4e-3)}
        fine = {r.property_name: r for r in run_suite(h=2e-3)}
        assert coarse["zero_crossing_max/linear"].tolerance_used == pytest.approx(2 * fine["zero_crossing_max/linear"].tolerance_used)
