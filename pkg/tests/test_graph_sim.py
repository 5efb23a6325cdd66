"""
Pruebas de multigrafos, cortes, búsqueda local y extensión cúbica
"""

import math

import networkx as nx
import numpy as np
import pytest

from shared.core.graph_sim import (
    cubic_extend_coloring,
    cut_profile,
    empirical_x,
    gen_config_multigraph,
    is_locally_optimal,
    local_flip_search,
    max_induced_bipartite_bruteforce,
    maxcut_bruteforce,
    maximum_cuts,
    read_graph,
    write_graph,
)
from shared.models import Cut, MultiGraph
from shared.services import WorkerPoolService
from shared.utils.errors import DomainError, ResourceLimitError, StorageError

X_U = 0.55909


def _k4():
    return MultiGraph.from_networkx(nx.complete_graph(4))


def _k33():
    return MultiGraph.from_networkx(nx.complete_bipartite_graph(3, 3))


class TestGenerator:

    def test_single_vertex_is_all_loops(self):
        graph = gen_config_multigraph(1, 5, seed=0)
        assert graph.m == 5
        assert graph.loop_count == 5
        assert graph.non_loop_count == 0

    @pytest.mark.parametrize("n,m", [(10, 7), (50, 120), (3, 0)])
    def test_degree_sum(self, n, m):
        graph = gen_config_multigraph(n, m, seed=4)
        assert graph.m == m
        assert int(graph.degree().sum()) == 2 * m

    def test_reproducible(self):
        assert gen_config_multigraph(30, 40, seed=8) == gen_config_multigraph(30, 40, seed=8)
        assert gen_config_multigraph(30, 40, seed=8) != gen_config_multigraph(30, 40, seed=9)

    def test_two_vertices_one_edge_loop_frequency(self):
        # Los dos clones caen en el mismo vértice con probabilidad 2·(1/2)² = 1/2
        seeds = 20_000
        loops = sum(gen_config_multigraph(2, 1, seed=s).loop_count for s in range(seeds))
        sigma = math.sqrt(0.25 / seeds)
        assert abs(loops / seeds - 0.5) <= 3 * sigma

    @pytest.mark.slow
    def test_two_vertices_one_edge_loop_frequency_million_seeds(self):
        seeds = 1_000_000
        loops = sum(gen_config_multigraph(2, 1, seed=s).loop_count for s in range(seeds))
        assert abs(loops / seeds - 0.5) <= 3 * math.sqrt(0.25 / seeds)

    def test_domain(self):
        with pytest.raises(DomainError):
            gen_config_multigraph(0, 3, seed=0)


class TestGraphFiles:

    def test_round_trip_keeps_loops_and_multiplicity(self, tmp_path):
        graph = MultiGraph(n=3, edges=[(0, 1), (0, 1), (2, 2)])
        path = write_graph(graph, tmp_path / "g" / "multi.graph")
        assert read_graph(path) == graph

    def test_petersen_file(self, petersen):
        assert petersen.n == 10
        assert petersen.m == 15
        assert petersen.is_simple()
        assert np.all(petersen.degree() == 3)

    @pytest.mark.parametrize("body", ["", "3\n0 1\n", "3 2\n0 1\n", "3 1\n0 5\n", "3 1\n0 1 2\n"])
    def test_malformed(self, tmp_path, body):
        path = tmp_path / "bad.graph"
        path.write_text(body, encoding="utf-8")
        with pytest.raises(DomainError):
            read_graph(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(StorageError):
            read_graph(tmp_path / "missing.graph")


class TestLocalOptimality:

    def test_path(self):
        path = MultiGraph(n=3, edges=[(0, 1), (1, 2)])
        assert is_locally_optimal(path, Cut.from_sides(path, [0, 1, 0]))
        assert not is_locally_optimal(path, Cut.from_sides(path, [0, 0, 1]))

    def test_loop_convention(self):
        graph = MultiGraph(n=2, edges=[(0, 1), (0, 0)])
        cut = Cut.from_sides(graph, [0, 1])
        assert cut.value == 1
        assert is_locally_optimal(graph, cut)
        assert not is_locally_optimal(graph, cut, count_loops=True)

    def test_profile_matches_predicate(self):
        graph = gen_config_multigraph(6, 9, seed=2)
        values, optimal = cut_profile(graph, count_loops=True)
        bits = np.arange(1 << 6)[:, None] >> np.arange(6) & 1
        for k in range(1 << 6):
            cut = Cut.from_sides(graph, bits[k])
            assert values[k] == cut.value
            assert optimal[k] == is_locally_optimal(graph, cut, count_loops=True)

    @pytest.mark.parametrize("seed", range(5))
    def test_maximum_cuts_are_locally_optimal(self, seed):
        graph = gen_config_multigraph(8, 14, seed=seed)
        for cut in maximum_cuts(graph):
            assert cut.value == maxcut_bruteforce(graph)
            assert is_locally_optimal(graph, cut)

    def test_maximum_cuts_of_random_graphs(self):
        for seed in range(200):
            n = 2 + seed % 9
            graph = gen_config_multigraph(n, n + seed % 7, seed=seed)
            best = maxcut_bruteforce(graph)
            for cut in maximum_cuts(graph):
                assert cut.value == best
                assert is_locally_optimal(graph, cut), seed

    def test_bruteforce_limit(self):
        with pytest.raises(ResourceLimitError):
            cut_profile(MultiGraph(n=21, edges=[]))


class TestFlipSearch:

    @pytest.mark.parametrize("seed", range(6))
    def test_result_is_locally_optimal(self, seed):
        graph = gen_config_multigraph(40, 90, seed=seed)
        cut = local_flip_search(graph, seed=seed)
        assert cut.locally_optimal is True
        assert is_locally_optimal(graph, cut)
        assert cut.value == cut.recount(graph)
        assert 2 * cut.value >= graph.non_loop_count

    def test_never_exceeds_maximum_cut(self):
        for seed in range(1000):
            graph = gen_config_multigraph(10, 20, seed=seed)
            cut = local_flip_search(graph, seed=seed)
            assert 2 * cut.value >= graph.non_loop_count
            assert cut.value <= maxcut_bruteforce(graph), seed

    def test_from_initial_cut(self):
        graph = _k4()
        start = Cut.from_sides(graph, [0, 0, 0, 0])
        cut = local_flip_search(graph, init=start, seed=1)
        assert cut.value == 4
        assert cut.flips >= 1

    def test_already_optimal_needs_no_flips(self):
        graph = _k33()
        start = Cut.from_sides(graph, [0, 0, 0, 1, 1, 1])
        cut = local_flip_search(graph, init=start)
        assert cut.value == 9
        assert cut.flips == 0

    def test_wrong_initial_length(self):
        with pytest.raises(DomainError):
            local_flip_search(_k4(), init=Cut(side=[0, 1], value=0))


class TestEmpiricalX:

    def test_deterministic_across_workers(self):
        serial = empirical_x(60, 3.0, trials=6, seed=11)
        parallel = empirical_x(60, 3.0, trials=6, seed=11, pool=WorkerPoolService(workers=2))
        assert serial == parallel

    def test_statistic_in_range(self):
        estimate = empirical_x(200, 4.0, trials=4, seed=0)
        assert -0.1 < estimate.mean < 1.0

    @pytest.mark.slow
    def test_sparse_random_graph_statistic(self):
        estimate = empirical_x(2000, 16, trials=50, seed=0, pool=WorkerPoolService())
        assert 0.0 < estimate.mean < X_U + 0.1

    @pytest.mark.parametrize("n,c,trials", [(10, 0.05, 3), (10, 2.0, 0)])
    def test_domain(self, n, c, trials):
        with pytest.raises(DomainError):
            empirical_x(n, c, trials, seed=0)


class TestCubic:

    def test_petersen(self, petersen):
        assert maxcut_bruteforce(petersen) == 12
        bipartite = max_induced_bipartite_bruteforce(petersen)
        assert len(bipartite) == 7
        for seed in range(4):
            cut = cubic_extend_coloring(petersen, bipartite, seed=seed)
            assert cut.value >= 3 * 10 / 2 - 3
            assert cut.value <= 12

    def test_k4(self):
        graph = _k4()
        bipartite = max_induced_bipartite_bruteforce(graph)
        assert len(bipartite) == 2
        assert cubic_extend_coloring(graph, bipartite).value >= 4

    def test_k33(self):
        graph = _k33()
        assert max_induced_bipartite_bruteforce(graph) == list(range(6))
        assert cubic_extend_coloring(graph, range(6)).value == 9

    def test_random_cubic_graphs(self):
        checked = 0
        for seed in range(400):
            n = (8, 10, 12)[seed % 3]
            simple = nx.random_regular_graph(3, n, seed=seed)
            if not nx.is_connected(simple):
                continue
            graph = MultiGraph.from_networkx(simple)
            bipartite = max_induced_bipartite_bruteforce(graph)
            cut = cubic_extend_coloring(graph, bipartite, seed=seed)
            assert cut.value >= 3 * n / 2 - (n - len(bipartite)), seed
            checked += 1
            if checked == 100:
                break
        assert checked == 100

    def test_empty_bipartite_set(self, petersen):
        cut = cubic_extend_coloring(petersen, [], seed=2)
        assert cut.value >= 15 - 10

    def test_not_cubic(self):
        with pytest.raises(DomainError):
            cubic_extend_coloring(MultiGraph(n=3, edges=[(0, 1), (1, 2), (0, 2)]), [0, 1])

    def test_not_bipartite(self, petersen):
        # 0-1-2-3-4 es un ciclo impar
        with pytest.raises(DomainError):
            cubic_extend_coloring(petersen, [0, 1, 2, 3, 4])

    def test_out_of_range(self, petersen):
        with pytest.raises(DomainError):
            cubic_extend_coloring(petersen, [0, 12])
