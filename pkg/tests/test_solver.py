import logging
import math

import numpy as np
import pytest

from abcfrac.errors import (
    ConsistencyError,
    ContractionViolation,
    DominationFailure,
    HypothesisViolation,
    NonConvergence,
    PreconditionUnmet,
    DomainError,
)
from abcfrac.operators import Normalization, Trajectory, UniformGrid, ab_integral
from abcfrac.solver import (
    ConsistencyMode,
    DelayConfig,
    IVProblem,
    RhsFunction,
    SolverConfig,
    consistency_check,
    continue_globally,
    delay_convergence_study,
    equicontinuity_modulus,
    extremal_existence_interval,
    local_existence_interval,
    solve_delay_approx,
    solve_extremal,
    solve_ivp,
)

SQRT_PI = math.sqrt(math.pi)


def problem(f, omega0=0.0, T=1.0, alpha=0.5, L1=0.0, L2=0.0, M=1.0, b=1.0, B=Normalization()):
    return IVProblem(RhsFunction(f, L1, L2, M, b), omega0, T, alpha, B)


def exact_tau(t, a=0.5, B=1.0, scale=1.0):
    return scale * ((1 - a) * t / B + a * t ** (a + 1) / (B * math.gamma(a + 2)))


class TestSolveIVP:
    def test_zero_rhs(self):
        out = solve_ivp(problem(lambda t, w: 0.0, omega0=1.0), SolverConfig(1e-2))
        assert np.all(out.values == 1.0)

    def test_manufactured_tau(self):
        out = solve_ivp(problem(lambda t, w: t), SolverConfig(1e-3))
        assert 0.5 + 0.5 / math.gamma(2.5) == pytest.approx(0.876126, abs=1e-6)
        assert out.values[-1] == pytest.approx(0.5 + 0.5 / math.gamma(2.5), abs=1e-12)

    def test_initial_value_bit_exact(self):
        w0 = 0.1 + 0.2
        out = solve_ivp(problem(lambda t, w: t * w, omega0=w0, L2=1.0), SolverConfig(1e-2))
        assert out.values[0] == w0

    def test_state_independent_matches_ab_integral(self):
        grid = UniformGrid.over(1.0, 1e-2)
        u = Trajectory(grid, np.sin(grid.nodes))
        out = solve_ivp(problem(lambda t, w: math.sin(t), omega0=0.3), SolverConfig(1e-2))
        np.testing.assert_allclose(out.values, 0.3 + ab_integral(u, 0.5).values, atol=1e-14)

    def test_first_order_decay_nonlinear(self):
        # reference by Richardson on a fine run
        f = lambda t, w: t * math.cos(w)
        ref = solve_ivp(problem(f, omega0=0.5, L2=1.0), SolverConfig(1.25e-4)).values[-1]
        errs = [abs(solve_ivp(problem(f, omega0=0.5, L2=1.0), SolverConfig(h)).values[-1] - ref) for h in (4e-3, 2e-3, 1e-3)]
        assert errs[0] / errs[1] > 1.8 and errs[1] / errs[2] > 1.8

    def test_linear_against_mittag_leffler(self):
        # D w = -w, w(0) = 1 : w = (E_a(-lam t^a) scaled); compare with fine grid instead
        f = lambda t, w: -w
        coarse = solve_ivp(problem(f, omega0=1.0, L2=1.0), SolverConfig(2e-3)).values[-1]
        fine = solve_ivp(problem(f, omega0=1.0, L2=1.0), SolverConfig(5e-4)).values[-1]
        assert coarse == pytest.approx(fine, abs=1e-3)

    def test_iteration_count_bounded(self):
        L2 = 1.0
        cfg = SolverConfig(1e-2)
        out = solve_ivp(problem(lambda t, w: t * math.sin(w), omega0=0.0, L2=L2), cfg)
        factor = out.meta["contraction"]
        assert 0 < factor < 1
        assert out.meta["max_picard_iterations"] <= math.log(cfg.picard_tol) / math.log(factor) + 5

    def test_contraction_violation(self):
        with pytest.raises(ContractionViolation):
            solve_ivp(problem(lambda t, w: 2 * w, L2=2.0), SolverConfig(1e-2))

    def test_nonconvergence_with_tiny_budget(self):
        p = problem(lambda t, w: t + 0.9 * math.sin(w), L2=0.9)
        with pytest.raises(NonConvergence):
            solve_ivp(p, SolverConfig(1e-2, picard_tol=1e-15, picard_max_iter=2))

    def test_strict_consistency(self):
        with pytest.raises(ConsistencyError):
            solve_ivp(problem(lambda t, w: 1.0), SolverConfig(1e-2, consistency_mode=ConsistencyMode.STRICT))
        solve_ivp(problem(lambda t, w: t * w, L2=1.0), SolverConfig(1e-2, consistency_mode="strict"))

    def test_warn_mode_logs(self, caplog):
        with caplog.at_level(logging.WARNING):
            solve_ivp(problem(lambda t, w: 1.0), SolverConfig(1e-2))
        assert "not zero" in caplog.text

    def test_config_validation(self):
        with pytest.raises(DomainError):
            SolverConfig(0.0)
        with pytest.raises(DomainError):
            IVProblem(RhsFunction(lambda t, w: 0.0), 0.0, 0.0, 0.5)


def test_consistency_check_examples():
    assert consistency_check(problem(lambda t, w: t * w, omega0=3.0))
    assert not consistency_check(problem(lambda t, w: 1.0))
    assert consistency_check(problem(lambda t, w: math.sin(t) + w - 0.7, omega0=0.7), 1e-10)


def test_spot_check():
    good = RhsFunction(lambda t, w: t * math.cos(w), 1.0, 1.0, 1.0, 1.0)
    assert good.spot_check(1.0, 0.0) <= 1e-12
    bad = RhsFunction(lambda t, w: 5 * w, 0.0, 1.0, 1.0, 1.0)
    assert bad.spot_check(1.0, 0.0) > 0


class TestIntervals:
    def test_local_anchor(self):
        assert (SQRT_PI * 0.75 / 0.5) ** 2 == pytest.approx(7.068583, abs=1e-6)
        assert local_existence_interval(0.5, 1.0, 0.5, Normalization(), 10.0) == pytest.approx(7.068583, abs=1e-6)

    def test_local_clamps_and_boundary(self):
        assert local_existence_interval(0.5, 1.0, 0.5, Normalization(), 1.0) == 1.0
        with pytest.raises(HypothesisViolation):
            local_existence_interval(2.0, 1.0, 0.5, Normalization(), 10.0)

    def test_extremal_anchor(self):
        assert (0.4 * SQRT_PI / 1.2) ** 2 == pytest.approx(0.349066, abs=1e-6)
        assert extremal_existence_interval(0.1, 1.0, 0.5, Normalization(), 10.0) == pytest.approx(0.349066, abs=1e-6)
        assert extremal_existence_interval(0.1, 1.0, 0.5, Normalization(), 1e-9) == 1e-9
        with pytest.raises(HypothesisViolation):
            extremal_existence_interval(0.5, 1.0, 0.5, Normalization(), 10.0)

    def test_equicontinuity_anchor(self):
        expected = 0.1 * SQRT_PI * 0.5 / (SQRT_PI * 0.5 + 2.0)
        assert expected == pytest.approx(0.030706, abs=1e-5)
        assert equicontinuity_modulus(0.1, 0.5, Normalization(), 1.0, 1.0, 1.0) == pytest.approx(expected, rel=1e-14)
        assert equicontinuity_modulus(0.0, 0.5, Normalization(), 1.0, 1.0, 1.0) == 0.0
        with pytest.raises(HypothesisViolation):
            equicontinuity_modulus(0.1, 0.5, Normalization(), 1.0, 2.0, 1.0)


class TestDelay:
    def test_zero_rhs(self):
        p = problem(lambda t, w: 0.0, omega0=0.4)
        for eps in (0.2, 0.05):
            out = solve_delay_approx(p, DelayConfig(eps, 0.2, lambda s: 0.4, 0.4, 1.0), SolverConfig(1e-2))
            assert np.all(out.values == 0.4)

    def test_state_independent_equals_ivp(self):
        p = problem(lambda t, w: t)
        study = delay_convergence_study(p, lambda s: 0.0, [0.2, 0.1, 0.05], SolverConfig(1e-3))
        assert all(d < 1e-12 for _, d in study)

    def test_converges_as_eps_shrinks(self):
        p = problem(lambda t, w: t - 0.1 * w, omega0=0.2, L1=1.0, L2=0.1)
        study = delay_convergence_study(p, lambda s: 0.2, [0.2, 0.1, 0.05, 0.025], SolverConfig(1e-3))
        d = [x for _, x in study]
        assert all(x > y for x, y in zip(d, d[1:]))
        assert d[-1] < d[0] / 6

    def test_history_violations(self):
        with pytest.raises(PreconditionUnmet):
            DelayConfig(0.1, 0.2, lambda s: 0.0 + 5 * s, 0.0, 0.1)
        with pytest.raises(PreconditionUnmet):
            DelayConfig(0.1, 0.2, lambda s: 1.0, 0.0, 2.0)
        with pytest.raises(PreconditionUnmet):
            DelayConfig(0.3, 0.2, lambda s: 0.0, 0.0, 1.0)

    def test_delay_consistency_strict(self):
        p = problem(lambda t, w: w, omega0=0.0, L2=1.0)
        dconf = DelayConfig(0.1, 0.2, lambda s: -s, 0.0, 1.0)
        with pytest.raises(ConsistencyError):
            solve_delay_approx(p, dconf, SolverConfig(1e-2, consistency_mode="strict"))

    def test_windows_recorded(self):
        p = problem(lambda t, w: t)
        out = solve_delay_approx(p, DelayConfig(0.25, 0.25, lambda s: 0.0, 0.0, 1.0), SolverConfig(1e-2))
        assert out.meta["windows"] == 4


class TestExtremal:
    def test_zero_rhs(self):
        up, lo = solve_extremal(problem(lambda t, w: 0.0, omega0=0.3), SolverConfig(1e-2))
        np.testing.assert_allclose(up.values, 0.3, atol=1e-7)
        np.testing.assert_allclose(lo.values, 0.3, atol=1e-7)

    def test_brackets_every_level(self):
        p = problem(lambda t, w: t)
        ref = solve_ivp(p, SolverConfig(1e-2)).values
        up, lo = solve_extremal(p, SolverConfig(1e-2))
        for u, l in zip(up.meta["iterates"], lo.meta["iterates"]):
            assert np.all(l <= ref) and np.all(ref <= u)

    def test_maximal_iterates_decrease(self):
        p = problem(lambda t, w: t - 0.1 * w, L1=1.0, L2=0.1)
        up, lo = solve_extremal(p, SolverConfig(1e-2))
        its = up.meta["iterates"]
        assert all(np.all(b < a) for a, b in zip(its, its[1:]))
        assert up.meta["epsilons"][0] == 0.5

    def test_preconditions(self):
        p = problem(lambda t, w: t)
        with pytest.raises(PreconditionUnmet):
            solve_extremal(p, SolverConfig(1e-2), eps0=0.8)
        with pytest.raises(DomainError):
            solve_extremal(p, SolverConfig(1e-2), eps_factor=1.0)
        with pytest.raises(NonConvergence):
            solve_extremal(p, SolverConfig(1e-2), max_levels=3)


class TestContinuation:
    def test_zero(self):
        out = continue_globally(problem(lambda t, w: 0.0, omega0=0.2), RhsFunction(lambda t, u: 0.0), 1.0, SolverConfig(1e-2), 5.0)
        assert np.all(out.values == 0.2) and out.grid.T == pytest.approx(5.0)

    @pytest.mark.parametrize("restart", [False, True])
    def test_tau_cos_under_majorant(self, restart):
        w0 = 0.5
        p = problem(lambda t, w: t * math.cos(w), omega0=w0, L1=1.0, L2=1.5, M=1.5, b=1.0)
        g = RhsFunction(lambda t, u: t, 1.0, 0.0, 1.5, 1.0)
        out = continue_globally(p, g, w0 + 1.0, SolverConfig(1e-2), 1.5, restart=restart)
        eta = out.meta["majorant"]
        closed = np.array([w0 + 1.0 + exact_tau(t) for t in out.grid.nodes])
        if not restart:
            np.testing.assert_allclose(eta, closed, atol=1e-12)
        else:
            # restarting drops the memory term, so only the ordering survives
            assert np.all(eta >= closed - 1e-12)
        assert np.all(np.abs(out.values) <= eta + 1e-2)
        assert len(out.meta["windows"]) > 1

    def test_memory_preserving_equals_direct_solve(self):
        p = problem(lambda t, w: 0.1 * t * math.cos(w), omega0=0.5, L1=0.1, L2=0.3, M=0.3, b=1.0)
        g = RhsFunction(lambda t, u: 0.1 * t, 0.1, 0.0, 0.3, 1.0)
        out = continue_globally(p, g, 1.5, SolverConfig(1e-2), 3.0)
        direct = solve_ivp(IVProblem(p.rhs, 0.5, 3.0, 0.5), SolverConfig(1e-2))
        np.testing.assert_allclose(out.values, direct.values, atol=1e-13)

    def test_preconditions(self):
        p = problem(lambda t, w: 0.0, omega0=1.0)
        with pytest.raises(PreconditionUnmet):
            continue_globally(p, RhsFunction(lambda t, u: 0.0), 1.0, SolverConfig(1e-2), 2.0)
        q = problem(lambda t, w: 0.5 * t, omega0=0.0, M=0.5)
        with pytest.raises(HypothesisViolation):
            continue_globally(q, RhsFunction(lambda t, u: 0.1 * t), 1.0, SolverConfig(1e-2), 2.0)

    def test_domination_failure(self):
        # g vanishes on a hairline around u0, so the majorant stays at u0 while the
        # random hypothesis sampling never sees the gap
        p = problem(lambda t, w: t, omega0=0.0, b=0.5)
        g = RhsFunction(lambda t, u: 0.0 if abs(u - 0.5) < 1e-9 else t, box_halfwidth_b=0.5)
        with pytest.raises(DominationFailure):
            continue_globally(p, g, 0.5, SolverConfig(1e-2), 1.0)
