"""
Línea de comandos del cálculo de cotas Max-Cut.

    python -m shared.cli bounds --c 100
    python -m shared.cli scan --x 0.5 --out scan_x0.5.csv
    python -m shared.cli oracle k2 --n 2 --mu1 2 --mu2 1
    python -m shared.cli simulate --n 2000 --c 16 --trials 50 --seed 7
    python -m shared.cli cubic --graph data/petersen.graph --bruteforce

La salida (JSON o CSV) va a stdout y el log a stderr. Códigos de salida:
0 éxito, 2 argumentos o rutas inválidas, 3 fallo numérico, 4 límite de recursos.
"""

import argparse
import logging
import re
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from .config import Settings
from .core import combinatorial_oracles as oracles
from .core import graph_sim
from .core.orchestrator import BoundsOrchestrator, error_response
from .core.second_moment import scan
from .generators.report_writer import scan_to_csv, to_json
from .models.oracles import ExactValue, MomentQuery, OccupancySpec
from .services.report_storage_service import ReportStorageService
from .services.worker_pool import WorkerPoolService
from .utils.errors import DomainError, MaxCutError


def _int_list(text: str) -> List[int]:
    try:
        return [int(tok) for tok in re.split(r"[,\s]+", text.strip()) if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"lista de enteros inválida: {text!r}")


# ============================================================================
# Subcomandos
# ============================================================================

def cmd_bounds(args, settings: Settings) -> Dict[str, Any]:
    orchestrator = BoundsOrchestrator(settings)
    report, _ = orchestrator.compute_bounds(
        c=args.c, tol=args.tol, tol_x=args.tol_x, grid=args.grid, pdf_path=args.pdf,
    )
    return report.model_dump()


def cmd_scan(args, settings: Settings) -> Optional[Dict[str, Any]]:
    rows = scan(
        args.x, args.beta_min, args.beta_max, args.steps,
        pool=WorkerPoolService(settings.workers),
    )
    text = scan_to_csv(rows)
    if args.out is None:
        sys.stdout.write(text)
        return None

    path = ReportStorageService(settings.output_dir).save_text(text, args.out)
    gaps = [r.gap for r in rows if r.status == "ok"]
    return {
        "success": True,
        "path": str(path),
        "x": args.x,
        "rows": len(rows),
        "failed": sum(1 for r in rows if r.status == "failed"),
        "max_gap": max(gaps) if gaps else None,
    }


def cmd_oracle(args, settings: Settings) -> Dict[str, Any]:
    budget = settings.dp_budget
    pool = WorkerPoolService(settings.workers)

    if args.oracle == "k2":
        spec = OccupancySpec(bins=args.n, balls=[args.mu1, args.mu2])
        return {"oracle": "k2", "spec": spec.model_dump(), "value": ExactValue.of(oracles.k2_exact(spec, budget)).model_dump()}

    if args.oracle == "k4":
        spec = OccupancySpec(bins=args.n, balls=args.mu)
        return {"oracle": "k4", "spec": spec.model_dump(), "value": ExactValue.of(oracles.k4_exact(spec, budget)).model_dump()}

    if args.oracle == "poisson":
        check = oracles.poissonization_identity(args.n, args.mu, args.t)
        return {"oracle": "poisson", "n": args.n, "mu": args.mu, "t": args.t, **check.model_dump()}

    second = args.oracle == "moment2"
    query = MomentQuery(n=args.n, m=args.m, z_times_n=args.zn, balanced=second or args.balanced)
    exact = (oracles.second_moment_exact if second else oracles.first_moment_exact)(query, budget)
    result: Dict[str, Any] = {"oracle": args.oracle, "query": query.model_dump(), "exact": exact.model_dump()}
    if args.samples:
        # Se informan las dos convenciones de lazos; la diferencia no se corrige
        estimator = oracles.second_moment_mc if second else oracles.first_moment_mc
        excluded = estimator(query, args.samples, args.seed, pool)
        counted = estimator(query, args.samples, args.seed, pool, count_loops=True)
        result["monte_carlo"] = {
            "loops_excluded": excluded.model_dump(),
            "loops_counted": counted.model_dump(),
            "difference": excluded.mean - counted.mean,
        }
    return result


def cmd_simulate(args, settings: Settings) -> Dict[str, Any]:
    estimate = graph_sim.empirical_x(
        args.n, args.c, args.trials, args.seed, pool=WorkerPoolService(settings.workers),
    )
    return {
        "n": args.n,
        "c": args.c,
        "m": int(args.c * args.n),
        "trials": args.trials,
        "seed": args.seed,
        "mean_x": estimate.mean,
        "std_error": estimate.std_error,
    }


def cmd_cubic(args, settings: Settings) -> Dict[str, Any]:
    graph = graph_sim.read_graph(args.graph)
    if args.bruteforce:
        bipartite = graph_sim.max_induced_bipartite_bruteforce(graph)
    else:
        text = ReportStorageService(settings.output_dir).load_text(args.bipartite)
        try:
            bipartite = _int_list(text)
        except argparse.ArgumentTypeError as e:
            raise DomainError(str(e))

    cut = graph_sim.cubic_extend_coloring(graph, bipartite, seed=args.seed)
    u = graph.n - len(set(bipartite))
    result: Dict[str, Any] = {
        "n": graph.n,
        "m": graph.m,
        "bipartite_set": sorted(set(bipartite)),
        "u": u,
        "bound": 3 * graph.n / 2 - u,
        "cut": cut.model_dump(),
    }
    if graph.n <= graph_sim.MAX_BRUTEFORCE_N:
        result["maxcut"] = graph_sim.maxcut_bruteforce(graph)
    return result


# ============================================================================
# Parser
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxcut-bounds",
        description="Cotas de Max-Cut en grafos aleatorios dispersos",
    )
    parser.add_argument("--env-file", default=None, help="Archivo .env con variables MAXCUT_*")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="Constantes x_u, x_l e intervalos")
    p.add_argument("--c", type=float, default=None, help="Densidad de aristas para los intervalos")
    p.add_argument("--tol", type=float, default=1e-8, help="Tolerancia de x_u")
    p.add_argument("--tol-x", type=float, default=1e-4, help="Ancho final del intervalo de x_l")
    p.add_argument("--grid", type=int, default=64, help="Puntos de rejilla en β")
    p.add_argument("--pdf", default=None, help="Ruta del PDF del informe")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("scan", help="Barrido de W(x, β) frente a 2w(x)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--beta-min", type=float, default=0.01)
    p.add_argument("--beta-max", type=float, default=0.49)
    p.add_argument("--steps", type=int, default=97)
    p.add_argument("--out", default=None, help="Ruta del CSV (por defecto stdout)")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("oracle", help="Oráculos combinatorios exactos")
    oracle_sub = p.add_subparsers(dest="oracle", required=True)
    o = oracle_sub.add_parser("k2")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--mu1", type=int, required=True)
    o.add_argument("--mu2", type=int, required=True)
    o = oracle_sub.add_parser("k4")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--mu", type=_int_list, required=True, help="μ₁,μ₂,μ₃,μ₄")
    o = oracle_sub.add_parser("poisson")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--mu", type=int, required=True)
    o.add_argument("--t", type=_int_list, required=True, help="Composición t₁,…,t_n")
    for name in ("moment1", "moment2"):
        o = oracle_sub.add_parser(name)
        o.add_argument("--n", type=int, required=True)
        o.add_argument("--m", type=int, required=True)
        o.add_argument("--zn", type=int, required=True)
        o.add_argument("--samples", type=int, default=0, help="Muestras de Monte Carlo (0 = sólo exacto)")
        o.add_argument("--seed", type=int, default=0)
        if name == "moment1":
            o.add_argument("--balanced", action="store_true", help="Sólo cortes con |V₁| = n/2")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("simulate", help="Búsqueda local sobre G(n, ⌊cn⌋)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("cubic", help="Extensión de coloración en grafos cúbicos")
    p.add_argument("--graph", required=True, help="Archivo de grafo")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--bipartite", help="Archivo con el conjunto bipartito inducido")
    source.add_argument("--bruteforce", action="store_true", help="Conjunto bipartito máximo por fuerza bruta")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_cubic)

    return parser


def _fail(error: MaxCutError, command: str) -> int:
    logging.error(f"❌ {error.code}: {error.message}")
    sys.stdout.write(to_json(error_response(error, command=command)))
    return error.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = Settings.from_env(args.env_file)
        logging.basicConfig(
            level=getattr(logging, settings.log_level, logging.INFO),
            stream=sys.stderr,
            format="%(levelname)s %(message)s",
        )
        result = args.handler(args, settings)
    except MaxCutError as e:
        return _fail(e, args.command)
    except ValidationError as e:
        return _fail(DomainError(f"argumentos inválidos: {e.errors()[0]['msg']}"), args.command)

    if result is not None:
        sys.stdout.write(to_json(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
