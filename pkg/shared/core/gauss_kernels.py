"""
Funciones especiales gaussianas e integrales de cuña.

Todas las funciones son puras. Los consumidores (second_moment) usan
siempre la forma logarítmica: con β cerca de 0 el desplazamiento
a₂ = t/β^{3/2} alcanza magnitudes donde Q sub-desborda en doble precisión.

La integral doble

    Q(θ, a₁, a₂) = ∫_0^∞ ∫_{a₁z₂}^∞ exp(−((z₁−θ−a₂)² + z₂²)/2) dz₁ dz₂

se reduce analíticamente en z₁ a √(π/2)·erfc((a₁z₂−θ−a₂)/√2), dejando una
sola cuadratura adaptativa en z₂.
"""

import math
import logging
from typing import Sequence

import numpy as np
from scipy import integrate, special

from ..models.kernels import DEFAULT_QUAD, KernelValue, QuadSpec, WedgeParams
from ..utils.errors import ConvergenceError, DomainError

SQRT2 = math.sqrt(2.0)
SQRT_PI = math.sqrt(math.pi)
LOG_PI = math.log(math.pi)
HALF_LOG_HALF_PI = 0.5 * math.log(math.pi / 2.0)

# Por debajo de este argumento erfc no sub-desborda y se usa directamente
_ERFCX_SWITCH = 0.5

# Holgura sobre la tolerancia pedida antes de declarar no convergencia
_ACCEPT_FACTOR = 1e3


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"argumento no finito: {v}")


def ln_erfc(u):
    """log(erfc(u)) estable; acepta escalares o arreglos"""
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    small = arr < _ERFCX_SWITCH
    out = np.empty_like(arr)
    out[small] = np.log(special.erfc(arr[small]))
    big = ~small
    out[big] = np.log(special.erfcx(arr[big])) - arr[big] ** 2
    return float(out[0]) if np.ndim(u) == 0 else out


def _ln_erfc_scalar(u: float) -> float:
    if u < _ERFCX_SWITCH:
        return math.log(special.erfc(u))
    return math.log(special.erfcx(u)) - u * u


def erf_family(u: float):
    """
    Devuelve (erf(u), log erfc(u)).

    Para u grande log erfc(u) se calcula como log(erfcx(u)) − u², así que
    sigue siendo finito mucho más allá del sub-desborde de erfc.
    """
    _check_finite(u)
    return float(special.erf(u)), _ln_erfc_scalar(u)


def log1p_erf(v):
    """log(1 + erf(v)) = log(erfc(−v))"""
    return ln_erfc(-np.asarray(v, dtype=float))


def _ln_q(theta: float, a1: float, a2: float, quad: QuadSpec = DEFAULT_QUAD) -> float:
    """log Q(θ, a₁, a₂) sin construir modelos (ruta caliente del solver)"""
    s = theta + a2
    # El integrando logarítmico f(z) es decreciente en z: su máximo está en 0
    f0 = HALF_LOG_HALF_PI + _ln_erfc_scalar(-s / SQRT2)

    def scaled(z: float) -> float:
        f = -0.5 * z * z + HALF_LOG_HALF_PI + _ln_erfc_scalar((a1 * z - s) / SQRT2)
        return math.exp(f - f0)

    # Escala de decaimiento en z = 0: |f'(0)| = a₁·√2 / (√π·erfcx(−s/√2))
    slope = a1 * SQRT2 / (SQRT_PI * special.erfcx(-s / SQRT2))
    scale = 1.0 / max(1.0, slope) if math.isfinite(slope) else 0.0
    upper = quad.truncation
    points: Sequence[float] = [k * scale for k in (1.0, 4.0, 16.0, 64.0) if 0.0 < k * scale < upper]

    result = integrate.quad(
        scaled, 0.0, upper,
        epsabs=quad.abs_tol, epsrel=quad.rel_tol,
        limit=quad.max_subintervals,
        points=points or None,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    target = max(quad.abs_tol, quad.rel_tol * abs(value))
    if not value > 0.0 or abserr > _ACCEPT_FACTOR * target:
        raise ConvergenceError(
            f"Q(θ={theta}, a₁={a1}, a₂={a2}) no convergió",
            achieved_error=float(abserr),
            details={"theta": theta, "a1": a1, "a2": a2, "message": result[3] if len(result) > 3 else ""},
        )
    return f0 + math.log(value)


def q_integral(p: WedgeParams, q: QuadSpec = DEFAULT_QUAD) -> KernelValue:
    """Integral de cuña Q(θ, a₁, a₂) y su logaritmo"""
    _check_finite(p.theta, p.a1, p.a2)
    ln_value = _ln_q(p.theta, p.a1, p.a2, q)
    return KernelValue(math.exp(ln_value), ln_value)


def _ln_p(theta: float, a1: float, a2: float, quad: QuadSpec = DEFAULT_QUAD) -> float:
    return 0.5 * theta * theta - LOG_PI + _ln_q(theta, a1, a2, quad)


def p_value(p: WedgeParams, q: QuadSpec = DEFAULT_QUAD) -> KernelValue:
    """P = (1/π)·e^{θ²/2}·Q(θ, a₁, a₂) en forma logarítmica"""
    _check_finite(p.theta, p.a1, p.a2)
    ln_value = _ln_p(p.theta, p.a1, p.a2, q)
    return KernelValue(math.exp(ln_value), ln_value)


def _ln_half_cross(theta: float, a1: float, a2: float) -> float:
    s = theta + a2
    r = 1.0 + a1 * a1
    return (
        0.5 * math.log(math.pi / (2.0 * r))
        - s * s / (2.0 * r)
        + _ln_erfc_scalar(-a1 * s / math.sqrt(2.0 * r))
    )


def half_gaussian_cross(p: WedgeParams) -> KernelValue:
    """
    ∫_0^∞ exp(−(z² + (a₁z − θ − a₂)²)/2) dz en forma cerrada.

    Completando el cuadrado con r = 1 + a₁² y s = θ + a₂:
    √(π/(2r))·exp(−s²/(2r))·(1 + erf(a₁s/√(2r))).
    """
    _check_finite(p.theta, p.a1, p.a2)
    ln_value = _ln_half_cross(p.theta, p.a1, p.a2)
    return KernelValue(math.exp(ln_value), ln_value)


def wedge_probability(b1: float, b2: float, b3: float, q: QuadSpec = DEFAULT_QUAD) -> float:
    """
    ℙ(Z₁ + b₃ ≥ b₂·|Z₂ + b₁|) para normales estándar independientes.

    Con y = |Z₂ + b₁| la probabilidad es
    ∫_0^∞ (φ(y − b₁) + φ(y + b₁))·erfc((b₂y − b₃)/√2)/2 dy.
    """
    _check_finite(b1, b2, b3)
    if b2 < 0:
        raise DomainError(f"b₂ debe ser ≥ 0, llegó {b2}")

    inv_sqrt_2pi = 1.0 / math.sqrt(2.0 * math.pi)

    def integrand(y: float) -> float:
        density = inv_sqrt_2pi * (math.exp(-0.5 * (y - b1) ** 2) + math.exp(-0.5 * (y + b1) ** 2))
        return density * 0.5 * special.erfc((b2 * y - b3) / SQRT2)

    upper = q.truncation + abs(b1)
    points = [abs(b1)] if 0.0 < abs(b1) < upper else None
    result = integrate.quad(
        integrand, 0.0, upper,
        epsabs=q.abs_tol, epsrel=q.rel_tol,
        limit=q.max_subintervals, points=points, full_output=1,
    )
    value, abserr = result[0], result[1]
    if abserr > _ACCEPT_FACTOR * max(q.abs_tol, q.rel_tol * abs(value)):
        raise ConvergenceError(
            f"wedge_probability({b1}, {b2}, {b3}) no convergió",
            achieved_error=float(abserr),
        )
    logging.debug(f"🔍 wedge_probability({b1}, {b2}, {b3}) = {value}")
    return value


def diagonal_probability(b: float) -> float:
    """ℙ[X₁ ≥ X₂ + b] = erfc(b/2)/2, pues X₁ − X₂ ~ N(0, 2)"""
    _check_finite(b)
    return 0.5 * float(special.erfc(b / 2.0))
