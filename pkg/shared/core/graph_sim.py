"""
Multigrafos del modelo de configuración, cortes y búsquedas locales.

Convenciones:
  - Un lazo nunca cuenta en el valor del corte.
  - is_locally_optimal excluye los lazos por defecto (voltear un vértice no
    cambia su estado). Con count_loops=True cada lazo aporta sus dos clones
    al grado del propio lado, que es el evento que cuentan los oráculos.
"""

import logging
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..models.graphs import Cut, MultiGraph
from ..models.oracles import MonteCarloEstimate
from ..services.worker_pool import SERIAL, WorkerPoolService
from ..utils.errors import DomainError, ResourceLimitError, StorageError

MAX_BRUTEFORCE_N = 20
MAX_BIPARTITE_N = 18

# Asignaciones evaluadas por bloque en las enumeraciones exhaustivas
_PROFILE_CHUNK = 1 << 15


# ============================================================================
# Generación y archivos
# ============================================================================

def _sample_multigraph(n: int, m: int, rng: np.random.Generator) -> MultiGraph:
    # 2m clones en urnas uniformes y un emparejamiento perfecto uniforme
    owners = rng.integers(0, n, size=2 * m)
    matched = owners[rng.permutation(2 * m)].reshape(m, 2)
    edges = [(int(min(u, v)), int(max(u, v))) for u, v in matched]
    return MultiGraph(n=n, edges=edges)


def gen_config_multigraph(n: int, m: int, seed: int) -> MultiGraph:
    """
    Multigrafo G(n, m) del modelo de configuración.

    Args:
        n: Vértices (≥ 1)
        m: Aristas (≥ 0)
        seed: Semilla; la salida es reproducible

    Returns:
        MultiGraph con lazos y aristas repetidas permitidos
    """
    if n < 1 or m < 0:
        raise DomainError(f"se requiere n ≥ 1 y m ≥ 0, llegó n={n}, m={m}")
    return _sample_multigraph(n, m, np.random.default_rng(seed))


def read_graph(path) -> MultiGraph:
    """Lee el formato "n m" + m líneas "u v" (índices desde 0)"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise StorageError(f"no se pudo leer el grafo {path}: {e}")

    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    try:
        n, m = (int(tok) for tok in lines[0].split())
        edges = [tuple(int(tok) for tok in ln.split()) for ln in lines[1:]]
    except (IndexError, ValueError) as e:
        raise DomainError(f"archivo de grafo mal formado {path}: {e}")
    if len(edges) != m or any(len(e) != 2 for e in edges):
        raise DomainError(f"{path}: se declararon {m} aristas y llegaron {len(edges)} líneas válidas")
    try:
        return MultiGraph(n=n, edges=edges)
    except ValueError as e:
        raise DomainError(f"{path}: {e}")


def write_graph(graph: MultiGraph, path) -> Path:
    """Escribe el grafo; los lazos se escriben "u u" y la multiplicidad repite líneas"""
    target = Path(path)
    body = [f"{graph.n} {graph.m}"] + [f"{u} {v}" for u, v in graph.edges]
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text("\n".join(body) + "\n", encoding="utf-8")
    except OSError as e:
        raise StorageError(f"no se pudo escribir el grafo {path}: {e}")
    return target


# ============================================================================
# Cortes y optimalidad local
# ============================================================================

def _split_edges(graph: MultiGraph) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    edges = graph.edge_array()
    loops = edges[:, 0] == edges[:, 1]
    proper = edges[~loops]
    loop_count = np.bincount(edges[loops, 0], minlength=graph.n)
    return proper[:, 0], proper[:, 1], loop_count


def is_locally_optimal(graph: MultiGraph, cut: Cut, count_loops: bool = False) -> bool:
    """
    Cada vértice tiene al menos tantos vecinos cruzando como de su lado.

    Args:
        graph: Multigrafo
        cut: Corte a evaluar
        count_loops: Sumar 2 por lazo al grado del propio lado

    Returns:
        True si ningún volteo de un vértice mejora el corte
    """
    if len(cut.side) != graph.n:
        raise DomainError(f"el corte tiene {len(cut.side)} lados para {graph.n} vértices")
    side = np.asarray(cut.side, dtype=np.int8)
    u, v, loops = _split_edges(graph)
    crossing = side[u] != side[v]
    cross_deg = np.bincount(u[crossing], minlength=graph.n) + np.bincount(v[crossing], minlength=graph.n)
    degree = np.bincount(u, minlength=graph.n) + np.bincount(v, minlength=graph.n)
    same_deg = degree - cross_deg
    if count_loops:
        same_deg = same_deg + 2 * loops
    return bool(np.all(cross_deg >= same_deg))


@lru_cache(maxsize=8)
def assignment_bits(n: int) -> np.ndarray:
    """Fila k = bits de k: el lado de cada vértice en la asignación k"""
    bits = (np.arange(1 << n, dtype=np.int64)[:, None] >> np.arange(n)) & 1
    bits = bits.astype(np.int8)
    bits.setflags(write=False)
    return bits


def cut_profile(graph: MultiGraph, count_loops: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """
    Valor de corte y optimalidad local de las 2ⁿ asignaciones de lados.

    La asignación k pone el vértice v del lado (k >> v) & 1.

    Returns:
        (values, locally_optimal) de longitud 2ⁿ
    """
    if graph.n > MAX_BRUTEFORCE_N:
        raise ResourceLimitError(
            f"enumeración de 2^{graph.n} cortes por encima del límite n ≤ {MAX_BRUTEFORCE_N}"
        )
    n = graph.n
    bits = assignment_bits(n)
    u, v, loops = _split_edges(graph)

    incidence = np.zeros((len(u), n), dtype=np.int32)
    np.add.at(incidence, (np.arange(len(u)), u), 1)
    np.add.at(incidence, (np.arange(len(u)), v), 1)
    degree = incidence.sum(axis=0)
    if count_loops:
        degree = degree + 2 * loops

    values = np.empty(1 << n, dtype=np.int64)
    optimal = np.empty(1 << n, dtype=bool)
    for start in range(0, 1 << n, _PROFILE_CHUNK):
        block = bits[start:start + _PROFILE_CHUNK]
        crossing = (block[:, u] != block[:, v]).astype(np.int32)
        values[start:start + len(block)] = crossing.sum(axis=1)
        # cross ≥ same ⇔ 2·cross ≥ grado
        cross_deg = crossing @ incidence
        optimal[start:start + len(block)] = np.all(2 * cross_deg >= degree, axis=1)
    return values, optimal


def maxcut_bruteforce(graph: MultiGraph) -> int:
    """Valor de corte máximo por enumeración exhaustiva (n ≤ 20)"""
    values, _ = cut_profile(graph)
    return int(values.max())


def maximum_cuts(graph: MultiGraph) -> List[Cut]:
    """Todas las asignaciones que alcanzan el corte máximo"""
    values, _ = cut_profile(graph)
    best = values.max()
    bits = assignment_bits(graph.n)
    return [
        Cut(side=bits[k].tolist(), value=int(best))
        for k in np.flatnonzero(values == best)
    ]


# ============================================================================
# Búsqueda local por volteos
# ============================================================================

def _neighbor_lists(graph: MultiGraph) -> List[List[int]]:
    neighbors: List[List[int]] = [[] for _ in range(graph.n)]
    for u, v in graph.edges:
        if u != v:
            neighbors[u].append(v)
            neighbors[v].append(u)
    return neighbors


def _flip_search(graph: MultiGraph, side: np.ndarray, rng: np.random.Generator) -> Cut:
    side = side.astype(np.int8).copy()
    neighbors = _neighbor_lists(graph)

    # gain[v] = vecinos del mismo lado − vecinos cruzando
    gain = np.zeros(graph.n, dtype=np.int64)
    for v in range(graph.n):
        for w in neighbors[v]:
            gain[v] += 1 if side[w] == side[v] else -1

    # Conjunto de vértices mejorables con borrado O(1)
    improving: List[int] = []
    position = {}

    def include(v: int) -> None:
        if gain[v] > 0 and v not in position:
            position[v] = len(improving)
            improving.append(v)
        elif gain[v] <= 0 and v in position:
            i = position.pop(v)
            last = improving.pop()
            if last != v:
                improving[i] = last
                position[last] = i

    for v in range(graph.n):
        include(v)

    value = Cut.from_sides(graph, side).value
    flips = 0
    while improving:
        v = improving[int(rng.integers(len(improving)))]
        value += int(gain[v])
        side[v] ^= 1
        gain[v] = -gain[v]
        for w in neighbors[v]:
            gain[w] += 2 if side[w] == side[v] else -2
            include(w)
        include(v)
        flips += 1

    cut = Cut.from_sides(graph, side, locally_optimal=True, flips=flips)
    if cut.value != value:
        raise RuntimeError(f"valor incremental {value} ≠ recuento {cut.value}")
    return cut


def local_flip_search(graph: MultiGraph, init: Optional[Cut] = None, seed: int = 0) -> Cut:
    """
    Voltea vértices que mejoran estrictamente, elegidos al azar, hasta agotar.

    Args:
        graph: Multigrafo
        init: Corte inicial; por defecto lados uniformes al azar
        seed: Semilla de la elección de vértices (y del corte inicial)

    Returns:
        Corte localmente óptimo con el número de volteos en `flips`
    """
    rng = np.random.default_rng(seed)
    if init is None:
        side = rng.integers(0, 2, size=graph.n)
    else:
        if len(init.side) != graph.n:
            raise DomainError(f"el corte inicial tiene {len(init.side)} lados para {graph.n} vértices")
        side = np.asarray(init.side)
    return _flip_search(graph, side, rng)


def _empirical_trial(task: Tuple[int, int, float, int, int]) -> float:
    n, m, c, seed, index = task
    rng = np.random.default_rng([seed, index])
    graph = _sample_multigraph(n, m, rng)
    cut = _flip_search(graph, rng.integers(0, 2, size=n), rng)
    return (cut.value / n - c / 2.0) / np.sqrt(c)


def empirical_x(n: int, c: float, trials: int, seed: int,
                pool: WorkerPoolService = SERIAL) -> MonteCarloEstimate:
    """
    Estadístico (corte/n − c/2)/√c de la búsqueda local sobre G(n, ⌊cn⌋).

    Cada ensayo usa su propio flujo (seed, índice), así que el resultado no
    depende del número de procesos.
    """
    m = int(np.floor(c * n))
    if n < 1 or m < 1:
        raise DomainError(f"se requiere ⌊cn⌋ ≥ 1, llegó n={n}, c={c}")
    if trials < 1:
        raise DomainError(f"trials debe ser ≥ 1, llegó {trials}")

    logging.info(f"🔍 Simulación: n={n}, c={c}, m={m}, {trials} ensayos (seed={seed})")
    tasks = [(n, m, c, seed, i) for i in range(trials)]
    samples = np.asarray(pool.map_ordered(_empirical_trial, tasks), dtype=float)
    std_error = float(samples.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    estimate = MonteCarloEstimate(
        mean=float(samples.mean()), std_error=std_error, samples=trials, seed=seed,
    )
    logging.info(f"✅ x empírico = {estimate.mean:.5f} ± {estimate.std_error:.5f}")
    return estimate


# ============================================================================
# Grafos cúbicos
# ============================================================================

def _check_cubic(graph: MultiGraph) -> nx.Graph:
    if not graph.is_simple():
        raise DomainError("el grafo debe ser simple")
    if not np.all(graph.degree() == 3):
        raise DomainError("el grafo debe ser 3-regular")
    simple = nx.Graph(graph.to_networkx())
    if not nx.is_connected(simple):
        raise DomainError("el grafo debe ser conexo")
    return simple


def cubic_extend_coloring(graph: MultiGraph, bipartite_set: Sequence[int], seed: int = 0) -> Cut:
    """
    Extiende la 2-coloración de un conjunto bipartito inducido a todo el grafo.

    Repetidamente elige al azar un vértice sin color entre los que tienen más
    vecinos coloreados y le asigna el color opuesto a la mayoría de ellos
    (al azar si empatan). El corte resultante vale al menos 3n/2 − u, con u
    el número de vértices inicialmente sin color.

    Raises:
        DomainError: grafo no cúbico, no simple o no conexo, o conjunto no bipartito
    """
    simple = _check_cubic(graph)
    chosen = sorted(set(int(v) for v in bipartite_set))
    if any(not (0 <= v < graph.n) for v in chosen):
        raise DomainError("el conjunto bipartito contiene vértices fuera de rango")
    induced = simple.subgraph(chosen)
    if not nx.is_bipartite(induced):
        raise DomainError("el subgrafo inducido no es bipartito")

    rng = np.random.default_rng(seed)
    color = dict(nx.bipartite.color(induced)) if chosen else {}
    uncolored = sorted(set(range(graph.n)) - set(color))
    logging.debug(f"🔍 Extensión cúbica: {len(color)} coloreados, u={len(uncolored)}")

    while uncolored:
        counts = [sum(1 for w in simple[v] if w in color) for v in uncolored]
        top = max(counts)
        candidates = [v for v, k in zip(uncolored, counts) if k == top]
        v = candidates[int(rng.integers(len(candidates)))]
        zeros = sum(1 for w in simple[v] if color.get(w) == 0)
        ones = sum(1 for w in simple[v] if color.get(w) == 1)
        if zeros == ones:
            color[v] = int(rng.integers(2))
        else:
            color[v] = 1 if zeros > ones else 0
        uncolored.remove(v)

    cut = Cut.from_sides(graph, [color[v] for v in range(graph.n)])
    u = graph.n - len(chosen)
    if cut.value < 3 * graph.n / 2 - u:
        logging.warning(f"⚠️ corte {cut.value} por debajo de 3n/2 − u = {3 * graph.n / 2 - u}")
    return cut


def max_induced_bipartite_bruteforce(graph: MultiGraph) -> List[int]:
    """Conjunto inducido bipartito de tamaño máximo (n ≤ 18), el primero en orden lexicográfico"""
    if graph.n > MAX_BIPARTITE_N:
        raise ResourceLimitError(
            f"búsqueda de subconjuntos con n={graph.n} por encima del límite {MAX_BIPARTITE_N}"
        )
    simple = nx.Graph(graph.to_networkx())
    for size in range(graph.n, -1, -1):
        for subset in combinations(range(graph.n), size):
            if nx.is_bipartite(simple.subgraph(subset)):
                return list(subset)
    return []
