from __future__ import annotations

import itertools

import numpy as np
import pytest

from graphmab.graph import (
    Graph,
    Partition,
    SbmConfig,
    incidence_rows,
    read_graph,
    sbm_generate,
    write_graph,
)

from .conftest import random_connected_graph


class TestGraphConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(3, [(0, 1), (1, 2), (2, 2)])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValueError, match="duplicate"):
            Graph(3, [(0, 1), (1, 0), (1, 2)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            Graph(3, [(0, 1), (1, 3)])

    def test_rejects_disconnected(self):
        with pytest.raises(ValueError, match="not connected"):
            Graph(4, [(0, 1), (2, 3)])

    def test_single_node_is_connected(self):
        g = Graph(1, [])
        assert g.node_count == 1
        assert g.edge_count == 0

    def test_adjacency_consistent_with_edges(self, dumbbell6):
        seen = set()
        for i in range(dumbbell6.node_count):
            for j in dumbbell6.neighbors(i):
                seen.add((min(i, j), max(i, j)))
        assert seen == set(dumbbell6.edges)


class TestDistance:
    def test_path_two_hops(self, path3):
        assert path3.distance(0, 2) == 2

    def test_identity(self, dumbbell6):
        for i in range(6):
            assert dumbbell6.distance(i, i) == 0

    def test_triangle_direct_edge(self, triangle):
        assert triangle.distance(0, 1) == 1

    def test_invalid_node(self, path3):
        with pytest.raises(ValueError):
            path3.distance(0, 7)
        with pytest.raises(ValueError):
            path3.distance(-1, 0)

    def test_metric_on_random_small_graphs(self):
        # symmetry and triangle inequality, exhaustively for N <= 12
        rng = np.random.default_rng(7)
        for _ in range(25):
            n = int(rng.integers(2, 13))
            g = random_connected_graph(rng, n)
            d = g.all_distances()
            assert (d == d.T).all()
            assert (np.diag(d) == 0).all()
            for i, j, k in itertools.product(range(n), repeat=3):
                assert d[i, j] <= d[i, k] + d[k, j]

    def test_cache_matches_fresh_bfs(self):
        rng = np.random.default_rng(3)
        g = random_connected_graph(rng, 20)
        fresh = [list(g.distances_from(i)) for i in range(20)]
        cached = g.all_distances()
        assert (np.array(fresh) == cached).all()


class TestRing:
    def test_path_distance_two(self, path3):
        assert path3.ring(0, 2) == [2]

    def test_star_leaves_via_center(self, star5):
        assert star5.ring(1, 2) == [2, 3, 4]

    def test_beyond_eccentricity_empty(self, path3):
        assert path3.ring(0, 3) == []

    def test_radius_one_equals_neighborhood(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            g = random_connected_graph(rng, int(rng.integers(2, 20)))
            for i in range(g.node_count):
                assert tuple(g.ring(i, 1)) == g.neighbors(i)

    def test_rings_partition_other_nodes(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            g = random_connected_graph(rng, int(rng.integers(2, 20)))
            for i in range(g.node_count):
                union: set[int] = set()
                for r in range(1, g.node_count):
                    ring = set(g.ring(i, r))
                    assert not (union & ring)
                    union |= ring
                assert union == set(range(g.node_count)) - {i}

    def test_rejects_radius_zero(self, path3):
        with pytest.raises(ValueError):
            path3.ring(0, 0)


class TestIncidenceRows:
    def test_triangle_lexicographic(self, triangle):
        assert incidence_rows(triangle) == [(0, 1), (0, 2), (1, 2)]

    def test_path(self, path3):
        assert incidence_rows(path3) == [(0, 1), (1, 2)]

    def test_orientation_and_stability(self):
        rng = np.random.default_rng(5)
        g = random_connected_graph(rng, 15)
        rows = incidence_rows(g)
        assert rows == incidence_rows(g)
        assert rows == sorted(rows)
        assert all(u < v for u, v in rows)

    def test_connected_multinode_has_edges(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            g = random_connected_graph(rng, int(rng.integers(2, 10)))
            assert g.edge_count >= 1


class TestPartition:
    def test_cluster_of(self):
        part = Partition([[0, 2], [1, 3]], 4)
        assert list(part.cluster_of) == [0, 1, 0, 1]

    def test_rejects_overlap(self):
        with pytest.raises(ValueError, match="more than one"):
            Partition([[0, 1], [1, 2]], 3)

    def test_rejects_uncovered(self):
        with pytest.raises(ValueError, match="not covered"):
            Partition([[0, 1]], 3)

    def test_rejects_empty_cluster(self):
        with pytest.raises(ValueError, match="nonempty"):
            Partition([[0, 1, 2], []], 3)


class TestSbmConfig:
    def test_rejects_q_above_p(self):
        with pytest.raises(ValueError):
            SbmConfig(2, 0.5, 0.1, 0.2)

    def test_rejects_bad_success_prob(self):
        with pytest.raises(ValueError):
            SbmConfig(2, 0.0, 0.7, 0.01)


class TestSbmGenerate:
    def test_two_cliques_repaired_with_single_bridge(self):
        cfg = SbmConfig(2, 0.5, 1.0, 0.0, max_regen_attempts=1)
        g, part = sbm_generate(cfg, np.random.default_rng(0), cluster_sizes=[3, 3])
        assert g.node_count == 6
        assert g.edge_count == 7  # two triangles plus exactly one bridge
        cluster_of = part.cluster_of
        inter = [(u, v) for u, v in g.edges if cluster_of[u] != cluster_of[v]]
        assert len(inter) == 1

    def test_single_clique_is_complete(self):
        cfg = SbmConfig(1, 0.5, 1.0, 0.0)
        g, part = sbm_generate(cfg, np.random.default_rng(1), cluster_sizes=[4])
        assert g.node_count == 4
        assert g.edge_count == 6
        assert len(part) == 1

    def test_seed_reproducible(self):
        cfg = SbmConfig(10, 0.08, 0.7, 0.01)
        g1, p1 = sbm_generate(cfg, np.random.default_rng(42))
        g2, p2 = sbm_generate(cfg, np.random.default_rng(42))
        assert g1.edges == g2.edges
        assert p1.clusters == p2.clusters

    def test_geometric_sizes_support(self):
        cfg = SbmConfig(50, 0.9, 1.0, 0.5)
        _, part = sbm_generate(cfg, np.random.default_rng(2))
        sizes = [len(c) for c in part.clusters]
        assert min(sizes) >= 1
        assert 1 in sizes  # success prob 0.9 makes singletons common

    def test_empirical_edge_densities(self):
        # Monte Carlo edge counting over seeds; [50, 50] blocks so the
        # intra/inter pair counts are fixed at 2*C(50,2) and 50*50.
        cfg = SbmConfig(2, 0.5, 0.7, 0.01)
        intra_pairs = 2 * (50 * 49 // 2)
        inter_pairs = 50 * 50
        intra_density = np.empty(200)
        inter_density = np.empty(200)
        for s in range(200):
            g, part = sbm_generate(cfg, np.random.default_rng(s), cluster_sizes=[50, 50])
            cluster_of = part.cluster_of
            intra = sum(1 for u, v in g.edges if cluster_of[u] == cluster_of[v])
            intra_density[s] = intra / intra_pairs
            inter_density[s] = (g.edge_count - intra) / inter_pairs
        assert abs(intra_density.mean() - 0.7) < 0.02
        assert abs(inter_density.mean() - 0.01) < 0.005

    def test_rejects_bad_sizes(self):
        cfg = SbmConfig(2, 0.5, 0.7, 0.01)
        with pytest.raises(ValueError):
            sbm_generate(cfg, np.random.default_rng(0), cluster_sizes=[3, 0])


class TestSerialization:
    def test_round_trip_with_partition(self, tmp_path):
        rng = np.random.default_rng(17)
        cfg = SbmConfig(3, 0.3, 0.8, 0.05)
        g, part = sbm_generate(cfg, rng)
        path = tmp_path / "g.txt"
        write_graph(path, g, part)
        g2, part2 = read_graph(path)
        assert g2.edges == g.edges
        assert g2.node_count == g.node_count
        assert part2.clusters == part.clusters
        # byte-exact round trip
        write_graph(tmp_path / "g2.txt", g2, part2)
        assert (tmp_path / "g2.txt").read_bytes() == path.read_bytes()

    def test_round_trip_without_partition(self, tmp_path, dumbbell6):
        path = tmp_path / "g.txt"
        write_graph(path, dumbbell6)
        g2, part2 = read_graph(path)
        assert part2 is None
        assert g2.edges == dumbbell6.edges

    def test_rejects_bad_partition_line(self, tmp_path):
        (tmp_path / "g.txt").write_text("2 1\n0 1\n0\n")
        with pytest.raises(ValueError, match="partition line"):
            read_graph(tmp_path / "g.txt")
