"""
Segundo momento: punto de silla (t*, θ₁*, θ₂*), W(x, β) y la constante x_l.

Para un par (x, β) con γ = 1/2 − β, cada mitad del corte aporta un logP
de cuña:

    izquierda: a₁ = √(γ/β), a₂ = t/β^{3/2}
    derecha:   a₁ = √(β/γ), a₂ = (x − t)/γ^{3/2}

El θ de cada mitad minimiza logP (convexo en θ), raíz de θ + H/Q = 0.
El residuo en t es G′(t) para G(t) = inf_θ F y decrece en [0, x], así que
la silla se obtiene con dos niveles de búsqueda de raíz con intervalo.
"""

import math
import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize

from ..models.kernels import DEFAULT_QUAD, QuadSpec
from ..models.moments import (
    BetaMaximum,
    LowerBoundSearch,
    SaddleSolution,
    ScanRow,
    XlProbe,
)
from ..services.worker_pool import SERIAL, WorkerPoolService
from ..utils.errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    InconsistencyError,
    MaxCutError,
)
from .first_moment import X_ADMISSIBLE, X_RANGE, solve_xu, w_value
from .gauss_kernels import _ln_half_cross, _ln_p, _ln_q

DEFAULT_TOL = 1e-10
DEFAULT_BETA_MIN = 1e-4
# El ruido del solver en el colapso β = 1/4 es del orden de 1e-15; cerca de
# x_l el gap crece cuadráticamente y vale ~7e-9 a 1e-4 del umbral
DEFAULT_GAP_TOL = 1e-9

# Más allá de este |θ| logP es lineal en θ en doble precisión
THETA_CAP = 60.0

# Fracción mínima de puntos de rejilla resueltos en max_w_over_beta
MIN_GRID_SUCCESS = 0.9


# ============================================================================
# Ecuaciones internas en θ
# ============================================================================

def _theta_gradient(theta: float, a1: float, a2: float, quad: QuadSpec) -> float:
    """∂logP/∂θ = θ + H/Q; creciente en θ"""
    return theta + math.exp(_ln_half_cross(theta, a1, a2) - _ln_q(theta, a1, a2, quad))


def solve_inner_theta(a1: float, a2: float, tol: float = DEFAULT_TOL,
                      quad: QuadSpec = DEFAULT_QUAD) -> float:
    """
    Minimizador de logP(·, a₁, a₂).

    El gradiente en 0 es H/Q > 0, así que la raíz es negativa; el extremo
    izquierdo se duplica desde −1 hasta encontrar signo negativo.

    Raises:
        DivergenceError: si la expansión supera |θ| = 60
    """
    hi = 0.0
    g_hi = _theta_gradient(hi, a1, a2, quad)
    if g_hi <= 0.0:
        # H/Q sub-desbordó: el mínimo está en 0 a precisión de máquina
        return 0.0

    lo = -1.0
    while True:
        g_lo = _theta_gradient(lo, a1, a2, quad)
        if g_lo < 0.0:
            break
        hi = lo
        if lo <= -THETA_CAP:
            raise DivergenceError(
                f"sin raíz en θ ∈ [−{THETA_CAP:g}, 0] para a₁={a1:.6g}, a₂={a2:.6g}",
                details={"a1": a1, "a2": a2, "gradient_at_cap": g_lo},
            )
        lo = max(2.0 * lo, -THETA_CAP)

    return optimize.brentq(
        _theta_gradient, lo, hi, args=(a1, a2, quad),
        xtol=tol / 10.0, maxiter=200,
    )


# ============================================================================
# Geometría de un par (x, β)
# ============================================================================

class _Halves:
    """Parámetros de cuña de las dos mitades para (x, β) fijos"""

    def __init__(self, x: float, beta: float):
        self.x = x
        self.beta = beta
        self.gamma = 0.5 - beta
        self.a1_left = math.sqrt(self.gamma / beta)
        self.a1_right = math.sqrt(beta / self.gamma)
        self.left_scale = beta ** 1.5
        self.right_scale = self.gamma ** 1.5
        # Pendiente dominante del residuo en t
        self.t_scale = 1.0 / beta ** 2 + 1.0 / self.gamma ** 2

    def a2_left(self, t: float) -> float:
        return t / self.left_scale

    def a2_right(self, t: float) -> float:
        return (self.x - t) / self.right_scale

    def thetas(self, t: float, tol: float, quad: QuadSpec) -> Tuple[float, float]:
        theta1 = solve_inner_theta(self.a1_left, self.a2_left(t), tol, quad)
        theta2 = solve_inner_theta(self.a1_right, self.a2_right(t), tol, quad)
        return theta1, theta2

    def t_residual(self, t: float, theta1: float, theta2: float) -> float:
        """−t/β² + (x−t)/γ² − 2θ₁/√β + 2θ₂/√γ"""
        return (
            -t / self.beta ** 2
            + (self.x - t) / self.gamma ** 2
            - 2.0 * theta1 / math.sqrt(self.beta)
            + 2.0 * theta2 / math.sqrt(self.gamma)
        )


def _check_point(x: float, beta: float, beta_min: float) -> None:
    if not math.isfinite(x) or not (X_ADMISSIBLE[0] <= x <= X_ADMISSIBLE[1]):
        raise DomainError(f"x={x} fuera del intervalo admisible {X_ADMISSIBLE}")
    if not math.isfinite(beta) or not (beta_min <= beta <= 0.5 - beta_min):
        raise DomainError(
            f"β={beta} fuera de [{beta_min}, {0.5 - beta_min}]",
            details={"beta": beta, "beta_min": beta_min},
        )


def t_residual_profile(x: float, beta: float, t: float, tol: float = DEFAULT_TOL,
                       quad: QuadSpec = DEFAULT_QUAD) -> float:
    """Residuo normalizado de la ecuación en t con θ₁, θ₂ re-resueltos"""
    halves = _Halves(x, beta)
    theta1, theta2 = halves.thetas(t, tol, quad)
    return halves.t_residual(t, theta1, theta2) / halves.t_scale


# ============================================================================
# Operaciones públicas
# ============================================================================

def l_value(x: float, beta: float, t: float, theta1: float, theta2: float,
            quad: QuadSpec = DEFAULT_QUAD) -> float:
    """
    L(x, β, t, θ₁, θ₂) en argumentos arbitrarios (no necesariamente silla).

    Args:
        x: Exceso normalizado
        beta: Fracción de solapamiento, en (0, 1/2)
        t: Reparto del exceso, en [0, x]
        theta1, theta2: Parámetros de inclinación de cada mitad

    Returns:
        Valor de L; en la silla coincide con W(x, β)
    """
    if not (0.0 < beta < 0.5):
        raise DomainError(f"β={beta} fuera de (0, 1/2)")
    if not (0.0 <= t <= x):
        raise DomainError(f"t={t} fuera de [0, x={x}]")

    halves = _Halves(x, beta)
    gamma = halves.gamma
    entropy = -2.0 * beta * math.log(beta) - 2.0 * gamma * math.log(gamma)
    quadratic = -t * t / (2.0 * beta ** 2) - (x - t) ** 2 / (2.0 * gamma ** 2)
    ln_left = _ln_p(theta1, halves.a1_left, halves.a2_left(t), quad)
    ln_right = _ln_p(theta2, halves.a1_right, halves.a2_right(t), quad)
    return entropy + quadratic + 2.0 * beta * ln_left + 2.0 * gamma * ln_right


def _inward_points(x: float, toward: str) -> List[float]:
    """t = x·2⁻ᵏ (o x − x·2⁻ᵏ) para k = 2…52 y después el propio extremo"""
    offsets = [x * 2.0 ** -k for k in range(2, 53)]
    if toward == "lower":
        return offsets + [0.0]
    return [x - d for d in offsets] + [x]


def solve_saddle(x: float, beta: float, tol: float = DEFAULT_TOL,
                 quad: QuadSpec = DEFAULT_QUAD,
                 beta_min: float = DEFAULT_BETA_MIN) -> SaddleSolution:
    """
    Resuelve el sistema de tres ecuaciones para (t*, θ₁*, θ₂*).

    Con a₂ → 0 el θ de esa mitad diverge a −∞, así que el residuo en t vale
    +∞ en t = 0 y −∞ en t = x. El intervalo se busca desde x/2 hacia el
    extremo que haga falta hasta el primer residuo finito con el signo
    opuesto. Si el residuo finito conserva el signo hasta el último punto
    resoluble, la solución se fija allí y se marca en `boundary`.

    Raises:
        DomainError: x o β fuera de dominio
        DivergenceError: ningún t de [0, x] admite θ finitos
        ConvergenceError: residuos por encima de tol
    """
    _check_point(x, beta, beta_min)
    halves = _Halves(x, beta)

    def residual(t: float) -> float:
        try:
            theta1 = solve_inner_theta(halves.a1_left, halves.a2_left(t), tol, quad)
        except DivergenceError:
            return math.inf
        try:
            theta2 = solve_inner_theta(halves.a1_right, halves.a2_right(t), tol, quad)
        except DivergenceError:
            return -math.inf
        return halves.t_residual(t, theta1, theta2)

    boundary: Optional[str] = None
    t_mid = 0.5 * x
    r_mid = residual(t_mid)
    if not math.isfinite(r_mid):
        raise DivergenceError(
            f"silla (x={x}, β={beta}) sin θ finitos en t = x/2",
            details={"x": x, "beta": beta},
        )

    # La raíz está del lado hacia el que el residuo cambia de signo
    toward = "upper" if r_mid > 0.0 else "lower"
    t_inner, t_far = t_mid, None
    for t in _inward_points(x, toward):
        r = residual(t)
        if not math.isfinite(r):
            break
        if (r < 0.0) if toward == "upper" else (r > 0.0):
            t_far = t
            break
        t_inner = t

    if r_mid == 0.0:
        t_star = t_mid
    elif t_far is None:
        t_star, boundary = t_inner, toward
    else:
        lo, hi = sorted((t_inner, t_far))
        t_star = optimize.brentq(residual, lo, hi, xtol=tol / 100.0, maxiter=200)
        t_star = min(max(t_star, 0.0), x)

    theta1, theta2 = halves.thetas(t_star, tol, quad)
    residuals = (
        _theta_gradient(theta1, halves.a1_left, halves.a2_left(t_star), quad),
        _theta_gradient(theta2, halves.a1_right, halves.a2_right(t_star), quad),
        halves.t_residual(t_star, theta1, theta2) / halves.t_scale,
    )

    checked = residuals if boundary is None else residuals[:2]
    worst = max(abs(r) for r in checked)
    if worst > tol:
        raise ConvergenceError(
            f"silla (x={x}, β={beta}) con residuo {worst:.3e} > {tol:.1e}",
            achieved_error=worst,
            details={"x": x, "beta": beta, "t": t_star},
        )
    if boundary is not None:
        logging.debug(f"⚠️ silla (x={x}, β={beta}) fijada en el extremo {boundary}")

    W = l_value(x, beta, t_star, theta1, theta2, quad)
    return SaddleSolution(
        x=x, beta=beta, t=t_star, theta1=theta1, theta2=theta2,
        W=W, residuals=residuals, boundary=boundary,
    )


def w_big(x: float, beta: float, tol: float = DEFAULT_TOL,
          quad: QuadSpec = DEFAULT_QUAD,
          beta_min: float = DEFAULT_BETA_MIN) -> SaddleSolution:
    """W(x, β) = L en la silla; devuelve la SaddleSolution completa"""
    return solve_saddle(x, beta, tol, quad, beta_min)


# ============================================================================
# Tareas por punto (nivel de módulo: se envían a otros procesos)
# ============================================================================

def _saddle_task(task: Tuple[float, float, float, dict, float]):
    x, beta, tol, quad_fields, beta_min = task
    try:
        return solve_saddle(x, beta, tol, QuadSpec(**quad_fields), beta_min)
    except MaxCutError as e:
        return f"{e.code}: {e.message}"


def _solve_grid(x: float, betas: np.ndarray, tol: float, quad: QuadSpec,
                beta_min: float, pool: WorkerPoolService) -> list:
    quad_fields = quad.model_dump()
    tasks = [(x, float(b), tol, quad_fields, beta_min) for b in betas]
    return pool.map_ordered(_saddle_task, tasks)


def scan(x: float, beta_min: float, beta_max: float, steps: int,
         tol: float = DEFAULT_TOL, quad: QuadSpec = DEFAULT_QUAD,
         pool: WorkerPoolService = SERIAL) -> List[ScanRow]:
    """
    Barrido de W(x, β) frente a 2w(x) en una rejilla uniforme de β.

    Los puntos que fallan producen una fila con status="failed" y el
    mensaje del error; nunca se inventan números.

    Args:
        x: Exceso normalizado
        beta_min, beta_max: Extremos de la rejilla, 0 < beta_min < beta_max < 1/2
        steps: Número de puntos (≥ 1)
        pool: Servicio de procesos

    Returns:
        Lista de ScanRow ordenada por β
    """
    if not (0.0 < beta_min < beta_max < 0.5):
        raise DomainError(f"se requiere 0 < beta_min < beta_max < 1/2, llegó ({beta_min}, {beta_max})")
    if steps < 1:
        raise DomainError(f"steps debe ser ≥ 1, llegó {steps}")

    two_w = 2.0 * w_value(x)
    betas = np.linspace(beta_min, beta_max, steps)
    logging.info(f"🔍 Barrido W(x={x}, β) con {steps} puntos en [{beta_min}, {beta_max}]")

    rows: List[ScanRow] = []
    # El piso de β del solver no debe recortar la rejilla pedida
    floor = min(beta_min, 0.5 - beta_max)
    for beta, outcome in zip(betas, _solve_grid(x, betas, tol, quad, floor, pool)):
        if isinstance(outcome, SaddleSolution):
            rows.append(ScanRow.from_saddle(outcome, two_w))
        else:
            rows.append(ScanRow.failed(x, float(beta), outcome))

    failed = sum(1 for r in rows if r.status == "failed")
    if failed:
        logging.warning(f"⚠️ {failed}/{steps} puntos del barrido fallaron")
    logging.info(f"✅ Barrido completado para x={x}")
    return rows


def max_w_over_beta(x: float, grid: int = 64, tol: float = DEFAULT_TOL,
                    beta_min: float = DEFAULT_BETA_MIN,
                    quad: QuadSpec = DEFAULT_QUAD,
                    pool: WorkerPoolService = SERIAL) -> BetaMaximum:
    """
    Maximiza W(x, ·) en [beta_min, 1/4]: rejilla gruesa y sección áurea.

    β = 1/4 pertenece a la rejilla y alcanza 2w(x), así que gap ≥ −tol.

    Raises:
        DomainError: grid < 64
        ConvergenceError: menos del 90% de la rejilla resuelta
    """
    if grid < 64:
        raise DomainError(f"grid debe ser ≥ 64, llegó {grid}")

    two_w = 2.0 * w_value(x)
    betas = np.linspace(beta_min, 0.25, grid)
    outcomes = _solve_grid(x, betas, tol, quad, beta_min, pool)

    values = np.full(grid, -np.inf)
    failed_points: List[float] = []
    for i, outcome in enumerate(outcomes):
        if isinstance(outcome, SaddleSolution):
            values[i] = outcome.W
        else:
            failed_points.append(float(betas[i]))
            logging.debug(f"⚠️ β={betas[i]:.6g} omitido: {outcome}")

    solved = grid - len(failed_points)
    if solved < MIN_GRID_SUCCESS * grid:
        raise ConvergenceError(
            f"sólo {solved}/{grid} puntos de β resueltos para x={x}",
            details={"x": x, "failed_points": failed_points},
        )

    best = int(np.argmax(values))
    beta_star, W_star = float(betas[best]), float(values[best])

    interior = 0 < best < grid - 1
    if interior and np.isfinite(values[best - 1]) and np.isfinite(values[best + 1]):
        def negative_w(beta: float) -> float:
            try:
                return -solve_saddle(x, beta, tol, quad, beta_min).W
            except MaxCutError:
                return math.inf

        try:
            refined = optimize.minimize_scalar(
                negative_w,
                bracket=(float(betas[best - 1]), beta_star, float(betas[best + 1])),
                method="golden",
                options={"xtol": 1e-6},
            )
            if math.isfinite(refined.fun) and -refined.fun > W_star:
                beta_star, W_star = float(refined.x), float(-refined.fun)
        except ValueError as e:
            # Rejilla con empates: la sección áurea no acepta el triplete
            logging.debug(f"⚠️ refinamiento áureo omitido en x={x}: {e}")

    gap = W_star - two_w
    logging.debug(f"🔍 x={x}: β*={beta_star:.6g}, W*={W_star:.12g}, gap={gap:.3e}")
    return BetaMaximum(
        x=x, beta_star=beta_star, W_star=W_star, two_w=two_w, gap=gap,
        grid_points=grid, failed_points=failed_points,
    )


def _classify(x: float, gap_tol: float, **kwargs) -> XlProbe:
    maximum = max_w_over_beta(x, **kwargs)
    above = maximum.gap > gap_tol
    logging.info(
        f"🔍 x={x:.6f}: gap={maximum.gap:.3e} → {'above' if above else 'below'}"
    )
    return XlProbe(x=x, gap=maximum.gap, beta_star=maximum.beta_star, above=above)


def _check_monotone(probes: List[XlProbe]) -> None:
    above = [p for p in probes if p.above]
    below = [p for p in probes if not p.above]
    if not above or not below:
        return
    lowest_above = min(above, key=lambda p: p.x)
    highest_below = max(below, key=lambda p: p.x)
    if lowest_above.x < highest_below.x:
        raise InconsistencyError(
            f"clasificación no monótona: 'above' en x={lowest_above.x} "
            f"y 'below' en x={highest_below.x}",
            details={
                "above": lowest_above.model_dump(),
                "below": highest_below.model_dump(),
            },
        )


def search_xl(tol_x: float = 1e-4, gap_tol: float = DEFAULT_GAP_TOL,
              grid: int = 64, tol: float = DEFAULT_TOL,
              beta_min: float = DEFAULT_BETA_MIN,
              quad: QuadSpec = DEFAULT_QUAD,
              pool: WorkerPoolService = SERIAL,
              x_u: Optional[float] = None,
              verify_bracket: bool = True) -> LowerBoundSearch:
    """
    Bisección de x_l en [0.37613, x_u] con historial de clasificaciones.

    Args:
        tol_x: Ancho final del intervalo
        gap_tol: Umbral de la clasificación above/below
        grid: Puntos de rejilla en β por clasificación
        x_u: Cota superior ya calculada (si no, se resuelve)
        verify_bracket: Clasificar también los extremos

    Returns:
        LowerBoundSearch con x_l = punto medio del intervalo final
    """
    if tol_x <= 0:
        raise DomainError(f"tol_x debe ser > 0, llegó {tol_x}")

    lo = X_RANGE[0]
    hi = x_u if x_u is not None else solve_xu().x
    settings = dict(grid=grid, tol=tol, beta_min=beta_min, quad=quad, pool=pool)
    probes: List[XlProbe] = []

    logging.info(f"🔍 Búsqueda de x_l en [{lo}, {hi:.8f}] (tol_x={tol_x:.1e}, gap_tol={gap_tol:.1e})")
    if verify_bracket:
        for x_end in (lo, hi):
            probes.append(_classify(x_end, gap_tol, **settings))
        if probes[0].above or not probes[1].above:
            raise InconsistencyError(
                "los extremos del intervalo de x_l no se clasifican below/above",
                details={"lower": probes[0].model_dump(), "upper": probes[1].model_dump()},
            )

    while hi - lo > tol_x:
        mid = 0.5 * (lo + hi)
        probe = _classify(mid, gap_tol, **settings)
        probes.append(probe)
        _check_monotone(probes)
        if probe.above:
            hi = mid
        else:
            lo = mid

    x_l = 0.5 * (lo + hi)
    logging.info(f"✅ x_l = {x_l:.6f} (intervalo [{lo:.6f}, {hi:.6f}])")
    return LowerBoundSearch(
        x_l=x_l, bracket=(lo, hi), tol_x=tol_x, gap_tol=gap_tol, probes=probes,
    )


def solve_xl(tol_x: float = 1e-4, **kwargs) -> float:
    """x_l = sup{x ∈ [0.37613, x_u) : sup_β W(x, β) = 2w(x)}"""
    return search_xl(tol_x=tol_x, **kwargs).x_l
