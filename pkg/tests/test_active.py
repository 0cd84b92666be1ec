import numpy as np
import pytest

from dbtopo.active import load_query_csv, mssp, passive_run, s2_run, save_query_csv
from dbtopo.datasets import LabeledPointCloud, LabelOracle
from dbtopo.errors import InvalidParameterError
from dbtopo.graph import NeighborGraph, build_radius_graph, cut_structures

from .oracles import mssp_bruteforce


def _path_graph(n):
    adj = tuple(
        tuple(v for v in (i - 1, i + 1) if 0 <= v < n) for i in range(n)
    )
    return NeighborGraph(vertex_count=n, adjacency=adj, construction="manual")


def _random_connected_graph(rng, n):
    """Random tree plus extra edges, as adjacency tuples."""
    adj = [set() for _ in range(n)]
    for v in range(1, n):
        u = int(rng.integers(v))
        adj[u].add(v)
        adj[v].add(u)
    extra = int(rng.integers(0, n))
    for _ in range(extra):
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return NeighborGraph(
        vertex_count=n,
        adjacency=tuple(tuple(sorted(a)) for a in adj),
        construction="manual",
    )


class TestMssp:
    def test_path_midpoint(self):
        g = _path_graph(5)
        assert mssp(g, {0: 0, 4: 1}) == 2

    def test_adjacent_pair_returns_none(self):
        g = _path_graph(3)
        assert mssp(g, {0: 0, 1: 1}) is None

    def test_no_opposite_pair(self):
        g = _path_graph(4)
        assert mssp(g, {0: 0, 3: 0}) is None

    def test_disconnected_opposite_pair(self):
        g = NeighborGraph(vertex_count=4, adjacency=((1,), (0,), (3,), (2,)),
                          construction="manual")
        assert mssp(g, {0: 0, 3: 1}) is None

    def test_matches_bruteforce_on_random_graphs(self):
        rng = np.random.Generator(np.random.Philox(7))
        for trial in range(60):
            n = int(rng.integers(3, 25))
            g = _random_connected_graph(rng, n)
            m = int(rng.integers(2, n + 1))
            chosen = rng.permutation(n)[:m]
            labeled = {int(v): int(rng.integers(2)) for v in chosen}
            adj = {i: list(g.adjacency[i]) for i in range(n)}
            assert mssp(g, labeled) == mssp_bruteforce(adj, labeled)


class TestS2Run:
    def test_budget_zero(self):
        g = _path_graph(4)
        cloud = LabeledPointCloud(points=np.zeros((4, 2)), labels=np.array([0, 0, 1, 1]))
        log = s2_run(g, LabelOracle.from_cloud(cloud), budget=0, seed=1)
        assert log.entries == ()
        assert log.found_cut_edges == ()

    def test_budget_bounds_checked(self):
        g = _path_graph(4)
        cloud = LabeledPointCloud(points=np.zeros((4, 2)), labels=np.array([0, 0, 1, 1]))
        with pytest.raises(InvalidParameterError):
            s2_run(g, LabelOracle.from_cloud(cloud), budget=5, seed=1)

    def test_deterministic_given_seed(self):
        rng = np.random.Generator(np.random.Philox(3))
        g = _random_connected_graph(rng, 40)
        labels = rng.integers(0, 2, size=40)
        cloud = LabeledPointCloud(points=np.zeros((40, 2)), labels=labels)
        oracle = LabelOracle.from_cloud(cloud)
        a = s2_run(g, oracle, budget=25, seed=11)
        b = s2_run(g, oracle, budget=25, seed=11)
        assert a == b

    def test_full_budget_finds_exact_cutset(self):
        rng = np.random.Generator(np.random.Philox(5))
        for trial in range(30):
            n = int(rng.integers(4, 80))
            g = _random_connected_graph(rng, n)
            labels = rng.integers(0, 2, size=n)
            cloud = LabeledPointCloud(points=np.zeros((n, 2)), labels=labels)
            log = s2_run(g, LabelOracle.from_cloud(cloud), budget=n, seed=trial)
            expected = set(cut_structures(g, labels).cut_set)
            assert set(log.found_cut_edges) == expected

    def test_path_graph_bisection_budgeted(self):
        # one cut in a path: after both end labels are known, at most
        # ceil(log2 n) + 1 bisection queries precede cut discovery
        for n in (16, 64, 256):
            labels = np.array([0] * (n // 2) + [1] * (n - n // 2))
            cloud = LabeledPointCloud(points=np.zeros((n, 2)), labels=labels)
            g = _path_graph(n)
            log = s2_run(g, LabelOracle.from_cloud(cloud), budget=n, seed=2)
            steps = list(log.entries)
            seen0 = seen1 = False
            bisections_after_both = 0
            for v, y, phase in steps:
                if seen0 and seen1:
                    if phase == "bisect":
                        bisections_after_both += 1
                if y == 0:
                    seen0 = True
                else:
                    seen1 = True
                if log.found_cut_edges and (v in log.found_cut_edges[0]):
                    break
            assert bisections_after_both <= int(np.ceil(np.log2(n))) + 1


class TestPassiveRun:
    def test_without_replacement_and_deterministic(self):
        cloud = LabeledPointCloud(points=np.zeros((30, 2)),
                                  labels=np.zeros(30, dtype=np.int64))
        oracle = LabelOracle.from_cloud(cloud)
        log = passive_run(cloud, oracle, budget=30, seed=4)
        assert sorted(v for v, _, _ in log.entries) == list(range(30))
        again = passive_run(cloud, oracle, budget=30, seed=4)
        assert log == again

    def test_phases_uniform(self):
        cloud = LabeledPointCloud(points=np.zeros((10, 2)),
                                  labels=np.zeros(10, dtype=np.int64))
        log = passive_run(cloud, LabelOracle.from_cloud(cloud), budget=5, seed=0)
        assert all(phase == "uniform" for _, _, phase in log.entries)


class TestQueryCsv:
    def test_round_trip(self, tmp_path):
        cloud = LabeledPointCloud(
            points=np.random.Generator(np.random.Philox(0)).uniform(size=(20, 2)),
            labels=np.array([0, 1] * 10),
        )
        g = build_radius_graph(cloud, 0.7)
        log = s2_run(g, LabelOracle.from_cloud(cloud), budget=12, seed=9)
        path = tmp_path / "q.csv"
        save_query_csv(log, path)
        again = load_query_csv(path)
        assert again.entries == log.entries
