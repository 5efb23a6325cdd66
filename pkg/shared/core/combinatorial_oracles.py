"""
Oráculos combinatorios exactos para n pequeño.

Todo se calcula con enteros y Fraction. X(zn) cuenta asignaciones de lados
σ ∈ {0,1}ⁿ (cortes ordenados) de tamaño zn que son localmente óptimas con
la convención de K: cada lazo aporta sus dos clones al propio lado.

Probabilidad de un patrón de corte en el modelo de configuración:
los 2m clones se reparten en grupos por tipo de arista, cada grupo se
empareja internamente y los dueños de los clones se sortean; la condición
por vértice es un evento de urnas K(n, μ).
"""

import math
import logging
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize, stats

from ..models.oracles import (
    ExactValue,
    MomentQuery,
    MonteCarloEstimate,
    OccupancySpec,
    PoissonizationCheck,
)
from ..services.worker_pool import SERIAL, WorkerPoolService
from ..utils.errors import ConvergenceError, DomainError, ResourceLimitError
from .graph_sim import _sample_multigraph, assignment_bits, cut_profile

DEFAULT_DP_BUDGET = 100_000_000

MAX_FIRST_MOMENT_N = 12
MAX_FIRST_MOMENT_M = 12
MAX_SECOND_MOMENT_N = 8
MAX_SECOND_MOMENT_M = 8
MAX_MC_N = 16

# Muestras de Monte Carlo por tarea (fijo: el resultado no depende de los procesos)
MC_CHUNK = 2000

# Asignaciones enumeradas por bloque en k_bruteforce
BRUTEFORCE_CHUNK = 1 << 18


# ============================================================================
# Probabilidades de ocupación K
# ============================================================================

def _k2_allows(t: Tuple[int, ...]) -> bool:
    return t[0] >= t[1]


def _k4_allows(t: Tuple[int, ...]) -> bool:
    return t[1] - t[3] >= abs(t[0] - t[2])


_PREDICATES = {2: _k2_allows, 4: _k4_allows}


@lru_cache(maxsize=None)
def _occupancy_count(bins: int, balls: Tuple[int, ...]) -> int:
    """
    Asignaciones de bolas etiquetadas a urnas con la condición por urna.

    g_k(u) = Σ_{t ≤ u, válido} Π C(u_j, t_j)·g_{k−1}(u − t), g_0(u) = [u = 0].
    """
    allows = _PREDICATES[len(balls)]
    if bins == 0:
        return int(not any(balls))

    box = list(product(*(range(b + 1) for b in balls)))
    layer = {u: int(not any(u)) for u in box}
    valid = [t for t in box if allows(t)]
    for _ in range(bins):
        nxt = {}
        for u in box:
            total = 0
            for t in valid:
                if all(tj <= uj for tj, uj in zip(t, u)):
                    prev = layer[tuple(uj - tj for uj, tj in zip(u, t))]
                    if prev:
                        ways = 1
                        for uj, tj in zip(u, t):
                            ways *= math.comb(uj, tj)
                        total += ways * prev
            nxt[u] = total
        layer = nxt
    return layer[tuple(balls)]


def _occupancy_probability(bins: int, balls: Tuple[int, ...], budget: int = DEFAULT_DP_BUDGET) -> Fraction:
    cells = max(bins, 1)
    for b in balls:
        cells *= b + 1
    if cells > budget:
        raise ResourceLimitError(
            f"tabla DP de {cells} celdas por encima del presupuesto {budget}",
            details={"bins": bins, "balls": list(balls), "budget": budget},
        )
    if bins == 0:
        return Fraction(int(not any(balls)))
    return Fraction(_occupancy_count(bins, balls), bins ** sum(balls))


def k2_exact(spec: OccupancySpec, budget: int = DEFAULT_DP_BUDGET) -> Fraction:
    """
    K(n, μ₁, μ₂) = ℙ[E_i ≥ F_i para toda urna i].

    Args:
        spec: n urnas y (μ₁, μ₂) bolas
        budget: Máximo de celdas DP

    Returns:
        Probabilidad exacta
    """
    if len(spec.balls) != 2:
        raise DomainError("k2_exact necesita 2 colores de bolas")
    return _occupancy_probability(spec.bins, tuple(spec.balls), budget)


def k4_exact(spec: OccupancySpec, budget: int = DEFAULT_DP_BUDGET) -> Fraction:
    """K(n, μ₁..μ₄) = ℙ[E⁽²⁾ − E⁽⁴⁾ ≥ |E⁽¹⁾ − E⁽³⁾| en toda urna]"""
    if len(spec.balls) != 4:
        raise DomainError("k4_exact necesita 4 colores de bolas")
    return _occupancy_probability(spec.bins, tuple(spec.balls), budget)


def k_bruteforce(spec: OccupancySpec) -> Fraction:
    """Enumeración exhaustiva de las n^{Σμ} asignaciones (sólo para verificar)"""
    allows = _PREDICATES[len(spec.balls)]
    colors = np.repeat(np.arange(len(spec.balls)), spec.balls)
    total = spec.bins ** len(colors)
    if total > 10 ** 7:
        raise ResourceLimitError(f"{total} asignaciones por encima del límite de enumeración")

    places = spec.bins ** np.arange(len(colors), dtype=np.int64)
    hits = 0
    for start in range(0, total, BRUTEFORCE_CHUNK):
        index = np.arange(start, min(start + BRUTEFORCE_CHUNK, total), dtype=np.int64)
        # Dígito j en base n = urna de la bola j
        owners = (index[:, None] // places) % spec.bins
        ok = np.ones(len(index), dtype=bool)
        for urn in range(spec.bins):
            in_urn = owners == urn
            counts = tuple(in_urn[:, colors == j].sum(axis=1) for j in range(len(spec.balls)))
            ok &= allows(counts)
        hits += int(ok.sum())
    return Fraction(hits, total)


# ============================================================================
# Poissonización
# ============================================================================

def poissonization_identity(n: int, mu: int, t: Sequence[int], rate: Fraction = Fraction(1)) -> PoissonizationCheck:
    """
    Multinomial frente a Poisson independientes condicionados a la suma.

    Los n factores e^{−λ} del numerador cancelan el e^{−nλ} del
    denominador, así que ambos lados se comparan como racionales.
    """
    t = [int(v) for v in t]
    if len(t) != n or any(v < 0 for v in t):
        raise DomainError(f"t debe tener {n} entradas ≥ 0")
    if sum(t) != mu:
        raise DomainError(f"Σt = {sum(t)} ≠ μ = {mu}")
    rate = Fraction(rate)
    if rate <= 0:
        raise DomainError("la tasa debe ser positiva")

    multinomial = math.factorial(mu)
    for v in t:
        multinomial //= math.factorial(v)
    lhs = Fraction(multinomial, n ** mu)

    numerator = Fraction(1)
    for v in t:
        numerator *= rate ** v / math.factorial(v)
    denominator = (n * rate) ** mu / math.factorial(mu)
    rhs = numerator / denominator

    return PoissonizationCheck(lhs=str(lhs), rhs=str(rhs), equal=lhs == rhs)


def _poisson_tail(rate: float) -> int:
    """Cola de Pois(λ) despreciable más allá de λ + 40√λ + 40"""
    return int(rate + 40.0 * math.sqrt(rate) + 40.0)


def _dominance_moments(rate_b: float, rate_c: float) -> Tuple[float, float, float]:
    """log ℙ[B ≥ C], E[B | B ≥ C] y E[C | B ≥ C] con B ~ Pois(λ_B), C ~ Pois(λ_C)"""
    c = np.arange(_poisson_tail(rate_c) + 1)
    log_pc = stats.poisson.logpmf(c, rate_c)
    # ℙ[B ≥ c] = sf(c − 1) y E[B·1{B ≥ c}] = λ_B·ℙ[B ≥ c − 1]
    log_dominates = float(np.logaddexp.reduce(log_pc + stats.poisson.logsf(c - 1, rate_b)))
    mean_b = rate_b * math.exp(
        float(np.logaddexp.reduce(log_pc + stats.poisson.logsf(c - 2, rate_b))) - log_dominates
    )
    tail = c[1:]
    log_ec = float(np.logaddexp.reduce(np.log(tail) + log_pc[1:] + stats.poisson.logsf(tail - 1, rate_b)))
    mean_c = math.exp(log_ec - log_dominates)
    return log_dominates, mean_b, mean_c


def matched_poisson_rates(mean_b: float, mean_c: float) -> Tuple[float, float]:
    """
    Tasas (λ_B, λ_C) con E[B | B ≥ C] = mean_b y E[C | B ≥ C] = mean_c.

    Condicionada a {B ≥ C}, la ley de (B, C) es una familia exponencial en
    (log λ_B, log λ_C) con log-partición λ_B + λ_C + log ℙ[B ≥ C]; las
    tasas buscadas minimizan su transformada de Legendre, que es convexa.

    Raises:
        DomainError: salvo 0 < mean_c < mean_b
        ConvergenceError: si la minimización no alcanza gradiente 1e-8
    """
    if not (0.0 < mean_c < mean_b):
        raise DomainError(f"se requiere 0 < mean_c < mean_b, llegó ({mean_b}, {mean_c})")

    def dual(log_rates: np.ndarray) -> Tuple[float, np.ndarray]:
        rate_b, rate_c = np.exp(log_rates)
        log_dominates, eb, ec = _dominance_moments(rate_b, rate_c)
        value = rate_b + rate_c + log_dominates - mean_b * log_rates[0] - mean_c * log_rates[1]
        return value, np.array([eb - mean_b, ec - mean_c])

    start = np.log([mean_b, mean_c])
    result = optimize.minimize(dual, start, jac=True, method="BFGS", options={"gtol": 1e-10})
    worst = float(np.max(np.abs(result.jac)))
    if worst > 1e-8:
        raise ConvergenceError(
            f"tasas de Poisson sin converger para ({mean_b}, {mean_c})",
            achieved_error=worst,
        )
    rate_b, rate_c = np.exp(result.x)
    return float(rate_b), float(rate_c)


def poisson_product_bound(n: int, mu1: int, mu2: int,
                          rates: Optional[Tuple[float, float]] = None) -> float:
    """
    log de ℙ[B ≥ C]ⁿ / (ℙ[ΣB = μ₁]·ℙ[ΣC = μ₂]), B ~ Pois(λ_B), C ~ Pois(λ_C).

    Para cualesquiera tasas K(n, μ₁, μ₂) es este cociente por
    ℙ[ΣB = μ₁, ΣC = μ₂ | B_i ≥ C_i ∀i] ≤ 1, así que acota log K por arriba.
    Por defecto λ_B = μ₁/n y λ_C = μ₂/n; con matched_poisson_rates(μ₁/n, μ₂/n)
    la probabilidad condicional decae sólo como 1/n.
    """
    if n < 1 or mu1 < 0 or mu2 < 0:
        raise DomainError(f"argumentos inválidos n={n}, μ₁={mu1}, μ₂={mu2}")
    rate_b, rate_c = rates if rates is not None else (mu1 / n, mu2 / n)
    if rate_b < 0 or rate_c < 0:
        raise DomainError(f"tasas negativas ({rate_b}, {rate_c})")

    log_dominates = 0.0 if rate_c == 0 else _dominance_moments(rate_b, rate_c)[0]
    return (
        n * log_dominates
        - float(stats.poisson.logpmf(mu1, n * rate_b))
        - float(stats.poisson.logpmf(mu2, n * rate_c))
    )


# ============================================================================
# Momentos exactos
# ============================================================================

def _pair_matchings(k: int) -> int:
    """F(k) = k!/((k/2)!·2^{k/2}): emparejamientos perfectos de k clones"""
    if k % 2:
        return 0
    return math.factorial(k) // (math.factorial(k // 2) * 2 ** (k // 2))


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def first_moment_exact(q: MomentQuery, budget: int = DEFAULT_DP_BUDGET) -> ExactValue:
    """
    E[X(zn)] exacto en el modelo de configuración.

    Con n₁ = |V₁|, k = zn aristas cruzando, a aristas dentro de V₁ y b
    dentro de V₂ (a + b = m − k), cada término es

        C(n, n₁)·(2m)!/((2a)!(2b)!k!k!)·n₁^{2a+k}·n₂^{2b+k}·k!·F(2a)F(2b)
        / (n^{2m}·F(2m)) · K(n₁, k, 2a)·K(n₂, k, 2b)
    """
    n, m, k = q.n, q.m, q.z_times_n
    if n > MAX_FIRST_MOMENT_N or m > MAX_FIRST_MOMENT_M:
        raise ResourceLimitError(
            f"first_moment_exact admite n, m ≤ {MAX_FIRST_MOMENT_N}, llegó n={n}, m={m}"
        )
    if k > m:
        return ExactValue.of(Fraction(0))

    denominator = n ** (2 * m) * _pair_matchings(2 * m)
    sizes = [n // 2] if q.balanced else range(n + 1)
    total = Fraction(0)
    for n1 in sizes:
        n2 = n - n1
        for a in range(m - k + 1):
            b = m - k - a
            # ΣE < ΣF implica alguna urna violada
            if 2 * a > k or 2 * b > k:
                continue
            k_left = _occupancy_probability(n1, (k, 2 * a), budget)
            k_right = _occupancy_probability(n2, (k, 2 * b), budget)
            if not k_left or not k_right:
                continue
            groups = math.factorial(2 * m) // (
                math.factorial(2 * a) * math.factorial(2 * b) * math.factorial(k) ** 2
            )
            weight = (
                math.comb(n, n1) * groups
                * n1 ** (2 * a + k) * n2 ** (2 * b + k)
                * math.factorial(k) * _pair_matchings(2 * a) * _pair_matchings(2 * b)
            )
            total += Fraction(weight, denominator) * k_left * k_right

    logging.debug(f"🔍 E[X({k})] exacto (n={n}, m={m}) = {total}")
    return ExactValue.of(total)


# Tipos de arista entre las clases V₁..V₄ (V₁ = D₁∩D₃, V₂ = D₂∩D₃, V₃ = D₁∩D₄, V₄ = D₂∩D₄)
_PAIR_TYPES: List[Tuple[int, int]] = [(j, k) for j in range(4) for k in range(j, 4)]
_FIRST_CUT = {(0, 1), (0, 3), (1, 2), (2, 3)}
_SECOND_CUT = {(0, 2), (0, 3), (1, 2), (1, 3)}


def _class_balls(e: dict) -> List[Tuple[int, int, int, int]]:
    """Argumentos de K por clase: (E₁, E₂, E₃, E₄) con E₂ − E₄ ≥ |E₁ − E₃|"""
    return [
        (e[0, 1], e[0, 3], e[0, 2], 2 * e[0, 0]),
        (e[0, 1], e[1, 2], e[1, 3], 2 * e[1, 1]),
        (e[2, 3], e[1, 2], e[0, 2], 2 * e[2, 2]),
        (e[2, 3], e[0, 3], e[1, 3], 2 * e[3, 3]),
    ]


def second_moment_exact(q: MomentQuery, budget: int = DEFAULT_DP_BUDGET) -> ExactValue:
    """
    E[X²(zn)] exacto sobre pares ordenados de cortes balanceados.

    Las clases tienen tamaños (n₁, n/2 − n₁, n/2 − n₁, n₁); se suma sobre
    los diez conteos e_jk con ambos cortes de tamaño zn.
    """
    n, m, k = q.n, q.m, q.z_times_n
    if n > MAX_SECOND_MOMENT_N or m > MAX_SECOND_MOMENT_M:
        raise ResourceLimitError(
            f"second_moment_exact admite n, m ≤ {MAX_SECOND_MOMENT_N}, llegó n={n}, m={m}"
        )
    if k > m:
        return ExactValue.of(Fraction(0))

    half = n // 2
    denominator = n ** (2 * m) * _pair_matchings(2 * m)
    fact_2m = math.factorial(2 * m)
    total = Fraction(0)

    for counts in _compositions(m, len(_PAIR_TYPES)):
        e = dict(zip(_PAIR_TYPES, counts))
        if sum(e[p] for p in _FIRST_CUT) != k or sum(e[p] for p in _SECOND_CUT) != k:
            continue
        balls = _class_balls(e)
        if any(mu[1] - mu[3] < abs(mu[0] - mu[2]) for mu in balls):
            continue

        degrees = [
            2 * e[j, j] + sum(e[min(j, i), max(j, i)] for i in range(4) if i != j)
            for j in range(4)
        ]
        groups = fact_2m
        matchings = 1
        for (j, i), count in e.items():
            if j == i:
                groups //= math.factorial(2 * count)
                matchings *= _pair_matchings(2 * count)
            else:
                groups //= math.factorial(count)

        for n1 in range(half + 1):
            sizes = (n1, half - n1, half - n1, n1)
            kernels = Fraction(1)
            for size, mu in zip(sizes, balls):
                kernels *= _occupancy_probability(size, mu, budget)
                if not kernels:
                    break
            if not kernels:
                continue
            classes = math.factorial(n)
            owners = 1
            for size, d in zip(sizes, degrees):
                classes //= math.factorial(size)
                owners *= size ** d
            total += Fraction(classes * groups * matchings * owners, denominator) * kernels

    logging.debug(f"🔍 E[X²({k})] exacto (n={n}, m={m}) = {total}")
    return ExactValue.of(total)


# ============================================================================
# Monte Carlo
# ============================================================================

def _count_task(task: Tuple[int, int, int, bool, int, bool, int, int, int]) -> Tuple[int, int]:
    n, m, zn, balanced, power, count_loops, seed, index, size = task
    rng = np.random.default_rng([seed, index])
    balance_mask = assignment_bits(n).sum(axis=1) == n // 2 if balanced else None
    total = total_sq = 0
    for _ in range(size):
        graph = _sample_multigraph(n, m, rng)
        values, optimal = cut_profile(graph, count_loops=count_loops)
        mask = (values == zn) & optimal
        if balance_mask is not None:
            mask &= balance_mask
        x = int(mask.sum()) ** power
        total += x
        total_sq += x * x
    return total, total_sq


def _monte_carlo(q: MomentQuery, samples: int, seed: int, balanced: bool, power: int,
                 count_loops: bool, pool: WorkerPoolService) -> MonteCarloEstimate:
    if samples < 1:
        raise DomainError(f"samples debe ser ≥ 1, llegó {samples}")
    if q.n > MAX_MC_N:
        raise ResourceLimitError(f"Monte Carlo con enumeración de cortes admite n ≤ {MAX_MC_N}")

    tasks = [
        (q.n, q.m, q.z_times_n, balanced, power, count_loops, seed, index, min(MC_CHUNK, samples - start))
        for index, start in enumerate(range(0, samples, MC_CHUNK))
    ]
    logging.info(
        f"🔍 Monte Carlo: {samples} muestras en {len(tasks)} tareas "
        f"(seed={seed}, lazos={'sí' if count_loops else 'no'})"
    )
    partial = pool.map_ordered(_count_task, tasks)
    total = sum(p[0] for p in partial)
    total_sq = sum(p[1] for p in partial)

    mean = Fraction(total, samples)
    if samples > 1:
        variance = (Fraction(total_sq) - samples * mean * mean) / (samples - 1)
        std_error = math.sqrt(float(variance) / samples)
    else:
        std_error = 0.0
    return MonteCarloEstimate(
        mean=float(mean), std_error=std_error, samples=samples, seed=seed, count_loops=count_loops,
    )


def first_moment_mc(q: MomentQuery, samples: int, seed: int,
                    pool: WorkerPoolService = SERIAL,
                    count_loops: bool = False) -> MonteCarloEstimate:
    """
    Estimador de E[X(zn)]: cuenta por enumeración los cortes localmente
    óptimos de tamaño zn en multigrafos muestreados (n ≤ 16).

    Por defecto la optimalidad local excluye los lazos, como en graph_sim.
    Con count_loops=True cada lazo suma 2 al propio lado y el evento
    coincide con el de first_moment_exact.
    """
    return _monte_carlo(q, samples, seed, q.balanced, 1, count_loops, pool)


def second_moment_mc(q: MomentQuery, samples: int, seed: int,
                     pool: WorkerPoolService = SERIAL,
                     count_loops: bool = False) -> MonteCarloEstimate:
    """Estimador de E[X²(zn)] con X restringido a cortes balanceados"""
    return _monte_carlo(q, samples, seed, True, 2, count_loops, pool)
