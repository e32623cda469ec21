"""Mean-field two-cluster random-walk chain and its equilibrium.

Explains why random-walk sampling oversamples large clusters: the walk's
between-cluster hops form a 2-state Markov chain whose transition
probabilities follow from expected edge counts, and the stationary mass of
the larger cluster grows far beyond its size share.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition


@dataclass(frozen=True)
class TwoClusterModel:
    """Cluster sizes and edge probabilities of the two-block model."""

    n1: int
    n2: int
    p: float
    q: float

    def __post_init__(self) -> None:
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("cluster sizes must be >= 1")
        if not (0.0 <= self.q <= self.p <= 1.0):
            raise ValueError("need 0 <= q <= p <= 1")


@dataclass(frozen=True)
class ChainSummary:
    """Row-stochastic 2x2 transition matrix and its equilibrium pair."""

    transition: np.ndarray
    equilibrium: np.ndarray


def transition_matrix(m: TwoClusterModel) -> np.ndarray:
    """Between-cluster transition probabilities from expected edge counts.

    A node of cluster 1 has q*n2 expected edges into cluster 2 and p*(n1-1)
    within its own cluster, so the leave probability is their ratio;
    symmetrically for cluster 2.
    """
    den1 = m.q * m.n2 + m.p * (m.n1 - 1)
    den2 = m.q * m.n1 + m.p * (m.n2 - 1)
    if den1 <= 0.0 or den2 <= 0.0:
        raise ValueError("degenerate model: a cluster has no expected edges")
    p12 = m.q * m.n2 / den1
    p21 = m.q * m.n1 / den2
    return np.array([[1.0 - p12, p12], [p21, 1.0 - p21]])


def equilibrium(transition: np.ndarray) -> tuple[float, float]:
    """Stationary distribution of the 2-state chain, in closed form."""
    t = np.asarray(transition, dtype=np.float64)
    if t.shape != (2, 2):
        raise ValueError("transition matrix must be 2x2")
    p12, p21 = float(t[0, 1]), float(t[1, 0])
    if p12 + p21 <= 0.0:
        raise ValueError("reducible chain: both clusters are absorbing")
    v1 = p21 / (p12 + p21)
    return v1, 1.0 - v1


def analyze(m: TwoClusterModel) -> ChainSummary:
    t = transition_matrix(m)
    return ChainSummary(t, np.array(equilibrium(t)))


def empirical_occupancy(
    g: Graph,
    part: Partition,
    walk_steps: int,
    trials: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Fraction of random-walk time spent in each cluster, Monte Carlo.

    Each trial walks ``walk_steps`` ticks from a uniform start (the start
    counts as the first tick); fractions are aggregated over all trials.
    """
    if len(part) < 1:
        raise ValueError("empty partition")
    if walk_steps < 1 or trials < 1:
        raise ValueError("walk_steps and trials must be >= 1")
    cluster_of = part.cluster_of
    counts = np.zeros(len(part), dtype=np.int64)
    for _ in range(trials):
        current = int(rng.integers(g.node_count))
        counts[cluster_of[current]] += 1
        for _ in range(walk_steps - 1):
            nbrs = g.neighbors(current)
            current = nbrs[int(rng.integers(len(nbrs)))]
            counts[cluster_of[current]] += 1
    return counts / counts.sum()
