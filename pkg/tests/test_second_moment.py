"""
Pruebas del segundo momento: punto de silla, W(x, β) y búsqueda de x_l
"""

import math

import numpy as np
import pytest

from shared.core import second_moment
from shared.core.first_moment import solve_theta, w_value
from shared.core.second_moment import (
    l_value,
    max_w_over_beta,
    scan,
    search_xl,
    solve_inner_theta,
    solve_saddle,
    solve_xl,
    t_residual_profile,
    w_big,
)
from shared.models import XlProbe
from shared.models.moments import BetaMaximum
from shared.utils.errors import ConvergenceError, DivergenceError, DomainError, InconsistencyError

X_L = 0.47523
X_U = 0.55909


class TestInnerTheta:

    def test_unit_slope_matches_first_moment(self):
        x = 0.5
        assert solve_inner_theta(1.0, 4 * x) == pytest.approx(2 * solve_theta(x).theta, abs=1e-9)

    def test_root_is_negative(self):
        for a1, a2 in [(0.5, 1.0), (2.0, 3.0), (1.0, 2.0)]:
            assert solve_inner_theta(a1, a2) < 0

    def test_zero_shift_has_no_minimizer(self):
        # Con a₂ = 0 el gradiente θ + H/Q es positivo y sólo tiende a 0 en −∞
        with pytest.raises(DivergenceError):
            solve_inner_theta(1.0, 0.0)

    def test_large_shift_goes_to_zero(self):
        # Con a₂ enorme H/Q sub-desborda y el mínimo queda en 0
        assert solve_inner_theta(1.0, 500.0) == pytest.approx(0.0, abs=1e-12)


class TestSymmetricCollapse:

    @pytest.mark.parametrize("x", [0.40, X_L, 0.55])
    def test_quarter_reduces_to_first_moment(self, x):
        solution = solve_saddle(x, 0.25)
        theta = solve_theta(x).theta
        assert solution.theta1 == pytest.approx(2 * theta, abs=1e-6)
        assert solution.theta2 == pytest.approx(2 * theta, abs=1e-6)
        assert solution.t == pytest.approx(x / 2, abs=1e-6)
        assert solution.W == pytest.approx(2 * w_value(x), abs=1e-8)

    def test_w_big_alias(self):
        assert w_big(0.45, 0.25).W == solve_saddle(0.45, 0.25).W


class TestSaddle:

    @pytest.mark.parametrize("beta", [0.05, 0.1, 0.2])
    def test_reflection_symmetry(self, beta):
        x = 0.5
        left = solve_saddle(x, beta)
        right = solve_saddle(x, 0.5 - beta)
        assert right.W == pytest.approx(left.W, abs=1e-8)
        assert right.t == pytest.approx(x - left.t, abs=1e-6)
        assert right.theta1 == pytest.approx(left.theta2, abs=1e-6)
        assert right.theta2 == pytest.approx(left.theta1, abs=1e-6)

    def test_residuals(self):
        solution = solve_saddle(X_L, 0.1)
        assert max(abs(r) for r in solution.residuals[:2]) <= 1e-9
        if solution.boundary is None:
            assert solution.max_residual <= 1e-9
        assert 0.0 <= solution.t <= X_L

    def test_l_value_at_saddle(self):
        s = solve_saddle(X_L, 0.15)
        assert l_value(s.x, s.beta, s.t, s.theta1, s.theta2) == pytest.approx(s.W, abs=1e-14)

    @pytest.mark.parametrize("h", [1e-3, -1e-3])
    def test_theta_perturbation_increases_l(self, h):
        s = solve_saddle(X_L, 0.15)
        assert l_value(s.x, s.beta, s.t, s.theta1 + h, s.theta2) >= s.W
        assert l_value(s.x, s.beta, s.t, s.theta1, s.theta2 + h) >= s.W

    @pytest.mark.parametrize("x,beta", [(0.5, 0.25), (0.40, 0.25), (X_L, 0.1)])
    def test_interior_root_despite_divergent_ends(self, x, beta):
        solution = solve_saddle(x, beta)
        assert solution.boundary is None
        assert 0.0 < solution.t < x
        assert solution.max_residual <= 1e-9

    def test_end_points_diverge(self):
        with pytest.raises(DivergenceError):
            t_residual_profile(0.5, 0.25, 0.0)

    def test_random_theta_perturbations_increase_l(self):
        rng = np.random.default_rng(2024)
        for x, beta in zip(rng.uniform(0.40, 0.55, 10), rng.uniform(0.02, 0.48, 10)):
            s = solve_saddle(float(x), float(beta))
            for h1, h2 in [(0.01, 0.0), (-0.01, 0.0), (0.0, 0.01), (0.0, -0.01), (0.01, -0.01)]:
                assert l_value(s.x, s.beta, s.t, s.theta1 + h1, s.theta2 + h2) >= s.W - 1e-12

    def test_t_residual_decreasing(self):
        x, beta = 0.5, 0.12
        profile = [t_residual_profile(x, beta, t) for t in np.linspace(0, x, 11)[1:-1]]
        assert all(a >= b for a, b in zip(profile, profile[1:]))

    @pytest.mark.parametrize("x,beta", [(0.5, 0.0), (0.5, 0.5), (0.5, 0.6), (0.8, 0.2), (0.5, 5e-5), (math.nan, 0.2)])
    def test_domain(self, x, beta):
        with pytest.raises(DomainError):
            solve_saddle(x, beta)

    def test_l_value_domain(self):
        with pytest.raises(DomainError):
            l_value(0.5, 0.2, 0.6, -0.1, -0.1)
        with pytest.raises(DomainError):
            l_value(0.5, 0.5, 0.2, -0.1, -0.1)


class TestScan:

    def test_rows_and_gap(self):
        rows = scan(0.5, 0.2, 0.3, 3)
        assert [r.beta for r in rows] == pytest.approx([0.2, 0.25, 0.3])
        assert all(r.status == "ok" for r in rows)
        assert all(r.gap == r.W - r.two_w for r in rows)
        assert rows[1].gap == pytest.approx(0.0, abs=1e-8)

    def test_reflection_symmetric_rows(self):
        rows = scan(0.5, 0.05, 0.45, 9)
        assert all(r.status == "ok" for r in rows)
        for left, right in zip(rows, reversed(rows)):
            assert left.beta + right.beta == pytest.approx(0.5)
            assert left.W == pytest.approx(right.W, abs=1e-8)

    def test_failed_points_are_reported(self, monkeypatch):
        original = second_moment.solve_saddle

        def flaky(x, beta, *args, **kwargs):
            if beta > 0.28:
                raise ConvergenceError("sin convergencia", achieved_error=1.0)
            return original(x, beta, *args, **kwargs)

        monkeypatch.setattr(second_moment, "solve_saddle", flaky)
        rows = scan(0.5, 0.2, 0.3, 3)
        assert [r.status for r in rows] == ["ok", "ok", "failed"]
        assert rows[2].W is None and rows[2].gap is None
        assert rows[2].error.startswith("CONVERGENCE_ERROR")

    @pytest.mark.parametrize("beta_min,beta_max,steps", [(0.0, 0.3, 5), (0.3, 0.2, 5), (0.1, 0.5, 5), (0.1, 0.3, 0)])
    def test_domain(self, beta_min, beta_max, steps):
        with pytest.raises(DomainError):
            scan(0.5, beta_min, beta_max, steps)


class TestMaxOverBeta:

    def test_small_grid_rejected(self):
        with pytest.raises(DomainError):
            max_w_over_beta(0.5, grid=10)

    def test_too_many_failures(self, monkeypatch):
        monkeypatch.setattr(second_moment, "_saddle_task", lambda task: "CONVERGENCE_ERROR: forzado")
        with pytest.raises(ConvergenceError):
            max_w_over_beta(0.5)

    @pytest.mark.slow
    def test_gap_above_lower_bound(self):
        maximum = max_w_over_beta(0.5)
        assert maximum.gap > 1e-6
        assert maximum.beta_star < 0.25

    @pytest.mark.slow
    def test_gap_vanishes_below_lower_bound(self):
        maximum = max_w_over_beta(0.40)
        assert abs(maximum.gap) <= 1e-6


def _fake_maximum(threshold):
    def fake(x, **kwargs):
        gap = x - threshold
        return BetaMaximum(
            x=x, beta_star=0.1, W_star=gap, two_w=0.0, gap=gap, grid_points=kwargs.get("grid", 64),
        )
    return fake


class TestSearchXl:

    def test_bisection_on_synthetic_gap(self, monkeypatch):
        monkeypatch.setattr(second_moment, "max_w_over_beta", _fake_maximum(0.47))
        search = search_xl(tol_x=1e-4, x_u=X_U)
        assert search.x_l == pytest.approx(0.47, abs=1e-4)
        assert search.bracket[1] - search.bracket[0] <= 1e-4
        assert search.probes[0].above is False
        assert search.probes[1].above is True

    def test_bad_bracket(self, monkeypatch):
        monkeypatch.setattr(second_moment, "max_w_over_beta", _fake_maximum(0.2))
        with pytest.raises(InconsistencyError):
            search_xl(x_u=X_U)

    def test_non_monotone_history(self):
        probes = [
            XlProbe(x=0.40, gap=0.0, beta_star=0.25, above=False),
            XlProbe(x=0.45, gap=1e-3, beta_star=0.1, above=True),
            XlProbe(x=0.50, gap=0.0, beta_star=0.25, above=False),
        ]
        with pytest.raises(InconsistencyError):
            second_moment._check_monotone(probes)

    def test_default_threshold_catches_small_gap(self, monkeypatch):
        # Cerca de x_l el gap ronda 1e-7; con un umbral de 1e-6 se clasificaba tarde
        monkeypatch.setattr(second_moment, "max_w_over_beta", _fake_maximum(0.4755 - 4.3e-7))
        assert second_moment.DEFAULT_GAP_TOL <= 1e-8
        assert second_moment._classify(0.4755, second_moment.DEFAULT_GAP_TOL).above is True

    @pytest.mark.slow
    def test_classification_around_lower_bound(self):
        below = second_moment._classify(0.4750, second_moment.DEFAULT_GAP_TOL)
        above = second_moment._classify(0.4755, second_moment.DEFAULT_GAP_TOL)
        assert below.above is False
        assert above.above is True
        assert above.beta_star < 0.25

    def test_tol_x_domain(self):
        with pytest.raises(DomainError):
            search_xl(tol_x=0.0, x_u=X_U)

    @pytest.mark.slow
    def test_lower_bound_constant(self):
        assert solve_xl(tol_x=1e-4, x_u=X_U) == pytest.approx(X_L, abs=2e-4)


@pytest.mark.slow
class TestScanFigures:

    def test_below_lower_bound_peaks_at_quarter(self):
        rows = [r for r in scan(X_L - 0.01, 0.01, 0.49, 97) if r.status == "ok"]
        best = max(rows, key=lambda r: r.W)
        assert best.beta == pytest.approx(0.25, abs=0.01)
        assert best.gap == pytest.approx(0.0, abs=1e-6)

    def test_above_lower_bound_has_positive_gap(self):
        rows = [r for r in scan(0.5, 0.01, 0.49, 97) if r.status == "ok"]
        assert max(r.gap for r in rows) > 1e-6

    def test_at_lower_bound_gap_is_negligible(self):
        rows = [r for r in scan(X_L, 0.01, 0.49, 97) if r.status == "ok"]
        assert len(rows) == 97
        assert max(r.gap for r in rows) <= 1e-4
