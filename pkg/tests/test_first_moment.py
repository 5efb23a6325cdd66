"""
Pruebas del primer momento: θ(x), w(x) y x_u
"""

import logging
import math

import numpy as np
import pytest

from shared.core.first_moment import (
    solve_theta,
    solve_xu,
    w1,
    w2,
    w_derivative,
    w_value,
)
from shared.utils.errors import BracketError, DomainError

X_U = 0.55909
THETA_U = -0.11079


class TestSolveTheta:

    def test_upper_bound_theta(self):
        assert solve_theta(X_U).theta == pytest.approx(THETA_U, abs=5e-5)

    def test_residual_and_bracket(self):
        solution = solve_theta(0.47523)
        assert abs(solution.residual) < 1e-12
        assert -0.47523 < solution.theta < 0

    @pytest.mark.parametrize("x", [0.38, 0.45, 0.5, 0.58])
    def test_fixed_point_form(self, x):
        theta = solve_theta(x).theta
        v = 2 * x + theta
        fixed = -math.exp(-v * v) / (math.sqrt(math.pi) * (1 + math.erf(v)))
        assert theta == pytest.approx(fixed, abs=1e-12)

    def test_warns_outside_guaranteed_range(self, caplog):
        with caplog.at_level(logging.WARNING):
            solution = solve_theta(0.62)
        assert any("0.62" in record.message for record in caplog.records)
        assert -0.62 < solution.theta < 0

    def test_no_sign_change_below_range(self):
        # w₂(0.35, −0.35) = −0.35 + 1/(√π·erfcx(−0.35)) ≈ +0.012
        with pytest.raises(BracketError):
            solve_theta(0.35)

    @pytest.mark.parametrize("x", [0.2, 0.75, math.nan])
    def test_rejects_inadmissible_x(self, x):
        with pytest.raises(DomainError):
            solve_theta(x)


class TestWValue:

    def test_left_anchor(self):
        assert w_value(0.3761) == pytest.approx(0.19721, abs=1e-4)

    def test_right_anchor(self):
        assert w_value(0.5887) == pytest.approx(-0.05595, abs=1e-4)

    def test_root(self):
        assert w_value(X_U) == pytest.approx(0.0, abs=5e-4)

    def test_strict_decrease(self):
        xs = np.linspace(0.37613, 0.58870, 12)
        values = [w_value(x) for x in xs]
        assert all(a > b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("x", [0.40, 0.50])
    def test_envelope_derivative(self, x):
        h = 1e-4
        numeric = (w_value(x + h) - w_value(x - h)) / (2 * h)
        assert numeric == pytest.approx(w_derivative(x), abs=1e-5)

    @pytest.mark.parametrize("x", [0.40, 0.47523, 0.55])
    def test_variational_form(self, x):
        """w(x) = −2x² + ínfimo en θ de θ² + log(1 + erf(2x + θ))"""
        thetas = np.arange(-2.0, 2.0, 1e-4)
        assert np.min(w1(x, thetas)) == pytest.approx(w_value(x), abs=1e-6)

    def test_vectorized_helpers(self):
        thetas = np.array([-0.3, -0.1, 0.0])
        np.testing.assert_allclose(w2(0.5, thetas), [w2(0.5, t) for t in thetas])
        assert isinstance(w1(0.5, -0.1), float)


class TestSolveXu:

    def test_constants(self):
        solution = solve_xu(1e-8)
        assert solution.x == pytest.approx(X_U, abs=5e-5)
        assert solution.theta == pytest.approx(THETA_U, abs=5e-5)

    def test_sign_change(self):
        x_u = solve_xu(1e-8).x
        assert w_value(x_u - 0.01) > 0
        assert w_value(x_u + 0.01) < 0
