"""
Primer momento con optimalidad local: θ(x), w(x) y la constante x_u.

    w₁(x, θ) = −2x² + θ² + log(1 + erf(2x + θ))
    w₂(x, θ) = θ + (1/√π)·e^{−(2x+θ)²} / (1 + erf(2x + θ))

θ(x) es la raíz de w₂(x, ·) en (−x, 0) y w(x) = w₁(x, θ(x)); x_u es la
raíz de w en [0.37613, 0.58870]. Como ẇ(x) = −4(x + θ(x)) < 0 ambos
problemas tienen intervalos monótonos y se resuelven por bisección.
"""

import math
import logging
from typing import Tuple

import numpy as np
from scipy import optimize, special

from ..models.moments import FirstMomentSolution
from ..utils.errors import BracketError, ConvergenceError, DomainError
from .gauss_kernels import SQRT_PI, log1p_erf

# Intervalo donde se garantiza unicidad
X_RANGE: Tuple[float, float] = (0.37613, 0.58870)

# Intervalo admisible (márgenes para barridos)
X_ADMISSIBLE: Tuple[float, float] = (0.3, 0.7)

DEFAULT_TOL = 1e-12


def w1(x, theta):
    """w₁(x, θ); vectorizada en θ"""
    theta = np.asarray(theta, dtype=float)
    out = -2.0 * x * x + theta ** 2 + log1p_erf(2.0 * x + theta)
    return float(out) if np.ndim(out) == 0 else out


def w2(x, theta):
    """
    w₂(x, θ); vectorizada en θ.

    e^{−v²}/(1 + erf v) = 1/erfcx(−v), forma que no pierde precisión.
    """
    theta = np.asarray(theta, dtype=float)
    out = theta + 1.0 / (SQRT_PI * special.erfcx(-(2.0 * x + theta)))
    return float(out) if np.ndim(out) == 0 else out


def _check_x(x: float) -> None:
    if not math.isfinite(x) or not (X_ADMISSIBLE[0] <= x <= X_ADMISSIBLE[1]):
        raise DomainError(f"x={x} fuera del intervalo admisible {X_ADMISSIBLE}")
    if not (X_RANGE[0] <= x <= X_RANGE[1]):
        logging.warning(f"⚠️ x={x} fuera de {X_RANGE}: la unicidad de θ(x) no está garantizada")


def solve_theta(x: float, tol: float = DEFAULT_TOL) -> FirstMomentSolution:
    """
    Resuelve w₂(x, θ) = 0 por bisección en θ ∈ (−x, 0).

    Args:
        x: Exceso normalizado del corte
        tol: Tolerancia sobre el residuo |w₂(x, θ)|

    Returns:
        FirstMomentSolution con θ(x), w(x) y el residuo
    """
    _check_x(x)
    lo, hi = -x, 0.0
    f_lo, f_hi = w2(x, lo), w2(x, hi)
    if not (f_lo < 0.0 < f_hi):
        raise BracketError(
            f"w₂(x, ·) no cambia de signo en (−x, 0) para x={x}",
            details={"x": x, "w2_at_minus_x": f_lo, "w2_at_zero": f_hi},
        )

    theta = optimize.bisect(lambda th: w2(x, th), lo, hi, xtol=tol / 10.0, maxiter=200)
    residual = w2(x, theta)
    if abs(residual) > tol:
        raise ConvergenceError(
            f"θ(x={x}) con residuo {residual:.3e} > {tol:.1e}",
            achieved_error=abs(residual),
        )
    w = w1(x, theta)
    logging.debug(f"🔍 θ({x}) = {theta:.15f}, w = {w:.15f}")
    return FirstMomentSolution(x=x, theta=theta, w=w, residual=residual)


def w_value(x: float, tol: float = DEFAULT_TOL) -> float:
    """w(x) = −2x² + θ(x)² + log(1 + erf(2x + θ(x)))"""
    return solve_theta(x, tol).w


def w_derivative(x: float, tol: float = DEFAULT_TOL) -> float:
    """ẇ(x) = −4(x + θ(x)), por el teorema de la envolvente"""
    return -4.0 * (x + solve_theta(x, tol).theta)


def solve_xu(tol: float = 1e-8) -> FirstMomentSolution:
    """
    Raíz de w(x) = 0 en [0.37613, 0.58870] por bisección.

    Returns:
        FirstMomentSolution en x_u (contiene x_u y θ_u)
    """
    lo, hi = X_RANGE
    w_lo, w_hi = w_value(lo), w_value(hi)
    if not (w_lo > 0.0 > w_hi):
        raise BracketError(
            "w no cambia de signo en el intervalo de x_u",
            details={"w_lo": w_lo, "w_hi": w_hi},
        )

    logging.info(f"🔍 Bisección de x_u en [{lo}, {hi}] (tol={tol:.1e})")
    x_u = optimize.bisect(w_value, lo, hi, xtol=tol, maxiter=200)
    solution = solve_theta(x_u)
    logging.info(f"✅ x_u = {solution.x:.8f}, θ_u = {solution.theta:.8f}")
    return solution
