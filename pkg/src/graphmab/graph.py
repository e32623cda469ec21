"""Undirected simple connected graphs, SBM generation, and hop queries."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class GenerationError(RuntimeError):
    """Raised when random graph generation cannot produce a connected graph."""


class Graph:
    """Undirected simple connected graph over nodes ``0..N-1``.

    Edges are stored as unordered pairs oriented low-id -> high-id and kept in
    lexicographic order, which fixes the row ordering of the edge-difference
    operator used by the recovery solver. Instances are immutable after
    construction and safe for concurrent reads; the all-pairs distance table
    is a lazily built cache.
    """

    def __init__(self, node_count: int, edges) -> None:
        if node_count < 1:
            raise ValueError(f"node_count must be >= 1, got {node_count}")
        self._n = int(node_count)

        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < self._n and 0 <= v < self._n):
                raise ValueError(f"edge ({u}, {v}) out of range for N={self._n}")
            pair = (u, v) if u < v else (v, u)
            if pair in seen:
                raise ValueError(f"duplicate edge {pair}")
            seen.add(pair)
        self._edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))

        adj: list[list[int]] = [[] for _ in range(self._n)]
        for u, v in self._edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)

        if self._reachable_from(0) != self._n:
            raise ValueError("graph is not connected")

        self._edge_arrays: tuple[np.ndarray, np.ndarray] | None = None
        self._dist: np.ndarray | None = None

    # ------------------------------------------------------------------ basic

    @property
    def node_count(self) -> int:
        return self._n

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges oriented low -> high, in lexicographic order."""
        return self._edges

    def neighbors(self, i: int) -> tuple[int, ...]:
        self._check_node(i)
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    @property
    def max_degree(self) -> int:
        return max(len(a) for a in self._adj)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as two int64 arrays (low ids, high ids)."""
        if self._edge_arrays is None:
            if self._edges:
                eu = np.ascontiguousarray([e[0] for e in self._edges], dtype=np.int64)
                ev = np.ascontiguousarray([e[1] for e in self._edges], dtype=np.int64)
            else:
                eu = np.empty(0, dtype=np.int64)
                ev = np.empty(0, dtype=np.int64)
            self._edge_arrays = (eu, ev)
        return self._edge_arrays

    def _check_node(self, i: int) -> None:
        if not (isinstance(i, (int, np.integer)) and 0 <= i < self._n):
            raise ValueError(f"invalid node id {i!r} for N={self._n}")

    def _reachable_from(self, source: int) -> int:
        seen = bytearray(self._n)
        seen[source] = 1
        queue = deque([source])
        count = 1
        while queue:
            u = queue.popleft()
            for v in self._adj[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    queue.append(v)
        return count

    # -------------------------------------------------------------- distances

    def distances_from(self, i: int) -> np.ndarray:
        """BFS hop counts from ``i`` to every node (int64 vector)."""
        self._check_node(i)
        if self._dist is not None:
            return self._dist[i]
        dist = np.full(self._n, -1, dtype=np.int64)
        dist[i] = 0
        queue = deque([i])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for v in self._adj[u]:
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue.append(v)
        return dist

    def all_distances(self) -> np.ndarray:
        """All-pairs BFS distance table, built once and cached."""
        if self._dist is None:
            rows = [self.distances_from(i) for i in range(self._n)]
            self._dist = np.vstack(rows)
        return self._dist

    def distance(self, i: int, j: int) -> int:
        """Shortest-path hop count between ``i`` and ``j``."""
        self._check_node(j)
        return int(self.distances_from(i)[j])

    def ring(self, i: int, r: int) -> list[int]:
        """Nodes at hop distance exactly ``r`` from ``i``, ascending.

        ``ring(i, 1)`` equals the adjacency neighborhood; the result is empty
        when ``r`` exceeds the eccentricity of ``i``.
        """
        if r < 1:
            raise ValueError(f"ring radius must be >= 1, got {r}")
        dist = self.distances_from(i)
        return [int(j) for j in np.nonzero(dist == r)[0]]


def incidence_rows(g: Graph) -> list[tuple[int, int]]:
    """Deterministic oriented edge list (low id -> high id, lexicographic)."""
    return list(g.edges)


class Partition:
    """Disjoint node clusters covering ``0..N-1``."""

    def __init__(self, clusters, node_count: int) -> None:
        self._clusters: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(int(i) for i in c)) for c in clusters
        )
        if not self._clusters or any(not c for c in self._clusters):
            raise ValueError("clusters must be nonempty")
        cluster_of = np.full(node_count, -1, dtype=np.int64)
        for idx, cluster in enumerate(self._clusters):
            for i in cluster:
                if not (0 <= i < node_count):
                    raise ValueError(f"node {i} out of range for N={node_count}")
                if cluster_of[i] >= 0:
                    raise ValueError(f"node {i} appears in more than one cluster")
                cluster_of[i] = idx
        if (cluster_of < 0).any():
            missing = int(np.nonzero(cluster_of < 0)[0][0])
            raise ValueError(f"node {missing} not covered by any cluster")
        self._cluster_of = cluster_of

    @property
    def clusters(self) -> tuple[tuple[int, ...], ...]:
        return self._clusters

    @property
    def cluster_of(self) -> np.ndarray:
        """Per-node cluster index (int64 vector)."""
        return self._cluster_of

    def __len__(self) -> int:
        return len(self._clusters)


@dataclass(frozen=True)
class SbmConfig:
    """Stochastic block model parameters.

    Cluster sizes are drawn i.i.d. from the geometric distribution on
    ``{1, 2, ...}`` with success probability ``size_success_prob`` unless
    explicit sizes are passed to :func:`sbm_generate`.
    """

    cluster_count: int
    size_success_prob: float
    intra_prob: float
    inter_prob: float
    max_regen_attempts: int = 20

    def __post_init__(self) -> None:
        if self.cluster_count < 1:
            raise ValueError("cluster_count must be >= 1")
        if not (0.0 < self.size_success_prob <= 1.0):
            raise ValueError("size_success_prob must be in (0, 1]")
        if not (0.0 <= self.inter_prob <= self.intra_prob <= 1.0):
            raise ValueError("need 0 <= inter_prob <= intra_prob <= 1")
        if self.max_regen_attempts < 1:
            raise ValueError("max_regen_attempts must be >= 1")


def _draw_edges(labels: np.ndarray, p: float, q: float, rng: np.random.Generator):
    n = labels.shape[0]
    iu, jv = np.triu_indices(n, k=1)
    probs = np.where(labels[iu] == labels[jv], p, q)
    mask = rng.random(iu.shape[0]) < probs
    return iu[mask], jv[mask]


def _component_labels(n: int, eu: np.ndarray, ev: np.ndarray) -> np.ndarray:
    parent = np.arange(n)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in zip(eu, ev):
        ru, rv = find(int(u)), find(int(v))
        if ru != rv:
            parent[ru] = rv
    return np.array([find(i) for i in range(n)])


def sbm_generate(
    cfg: SbmConfig,
    rng: np.random.Generator,
    cluster_sizes=None,
) -> tuple[Graph, Partition]:
    """Draw a connected SBM graph and its planted partition.

    Each intra-cluster pair is an edge with probability ``intra_prob``, each
    inter-cluster pair with probability ``inter_prob``. Disconnected draws are
    regenerated up to ``max_regen_attempts`` times; if still disconnected, the
    last draw is repaired by adding uniformly chosen inter-component edges
    (one per merge, so the number of added edges is minimal). Bit-reproducible
    for a fixed seeded ``rng``.
    """
    explicit = cluster_sizes is not None
    if explicit:
        sizes = np.asarray(cluster_sizes, dtype=np.int64)
        if sizes.ndim != 1 or sizes.shape[0] < 1 or (sizes < 1).any():
            raise ValueError("cluster_sizes must be positive integers")

    for _ in range(cfg.max_regen_attempts):
        if not explicit:
            sizes = rng.geometric(cfg.size_success_prob, size=cfg.cluster_count)
        labels = np.repeat(np.arange(sizes.shape[0]), sizes)
        n = int(sizes.sum())
        eu, ev = _draw_edges(labels, cfg.intra_prob, cfg.inter_prob, rng)
        comp = _component_labels(n, eu, ev)
        if np.unique(comp).shape[0] == 1:
            return _build(n, eu, ev, labels)

    # Repair the last draw: each added edge joins two distinct components.
    eu, ev = list(eu), list(ev)
    while True:
        comp = _component_labels(n, np.asarray(eu), np.asarray(ev))
        if np.unique(comp).shape[0] == 1:
            break
        iu, jv = np.triu_indices(n, k=1)
        cross = comp[iu] != comp[jv]
        candidates = np.nonzero(cross)[0]
        if candidates.shape[0] == 0:
            raise GenerationError("no inter-component pair available for repair")
        pick = candidates[rng.integers(candidates.shape[0])]
        eu.append(int(iu[pick]))
        ev.append(int(jv[pick]))
    return _build(n, np.asarray(eu), np.asarray(ev), labels)


def _build(n, eu, ev, labels) -> tuple[Graph, Partition]:
    graph = Graph(n, zip(eu, ev))
    clusters = [np.nonzero(labels == c)[0] for c in np.unique(labels)]
    return graph, Partition(clusters, n)


# ------------------------------------------------------------- serialization


def write_graph(path, g: Graph, partition: Partition | None = None) -> None:
    """Write the edge-list text format.

    Header ``N M``, one ``u v`` line per edge (0-based), and optionally a
    trailing line of per-node cluster indices. Round-trips bit-exactly.
    """
    lines = [f"{g.node_count} {g.edge_count}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    if partition is not None:
        lines.append(" ".join(str(int(c)) for c in partition.cluster_of))
    Path(path).write_text("\n".join(lines) + "\n")


def read_graph(path) -> tuple[Graph, Partition | None]:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    n, m = (int(tok) for tok in lines[0].split())
    edges = [tuple(int(tok) for tok in ln.split()) for ln in lines[1 : 1 + m]]
    graph = Graph(n, edges)
    partition = None
    if len(lines) > 1 + m:
        cluster_of = [int(tok) for tok in lines[1 + m].split()]
        if len(cluster_of) != n:
            raise ValueError("partition line length does not match node count")
        ids = sorted(set(cluster_of))
        clusters = [[i for i, c in enumerate(cluster_of) if c == cid] for cid in ids]
        partition = Partition(clusters, n)
    return graph, partition
