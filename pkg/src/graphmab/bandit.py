"""Gradient multi-armed bandit over hop actions for sampling-set selection.

The agent crawls the graph: at each step it draws a hop count ``a`` from a
softmax policy over ``{1..H}``, then moves to a uniformly chosen unsampled
node at hop distance exactly ``a``. One episode builds a full sampling set,
the recovery error of the resulting reconstruction is the (single, shared)
episode reward, and policy weights are updated by mini-batch gradient ascent
with RMSprop scaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .graph import Graph
from .recovery import SampleSet, SolverConfig, recover
from .signals import as_signal, mse


class Policy:
    """Softmax distribution over hop actions ``{1..H}``."""

    def __init__(self, horizon: int | None = None, weights=None) -> None:
        if weights is not None:
            w = np.asarray(weights, dtype=np.float64).copy()
            if w.ndim != 1 or w.shape[0] < 1:
                raise ValueError("weights must be a nonempty 1-D vector")
            if not np.isfinite(w).all():
                raise ValueError("weights must be finite")
            if horizon is not None and horizon != w.shape[0]:
                raise ValueError("horizon does not match weights length")
            self.weights = w
        else:
            if horizon is None or horizon < 1:
                raise ValueError("horizon must be >= 1")
            self.weights = np.zeros(int(horizon), dtype=np.float64)

    @property
    def horizon(self) -> int:
        return self.weights.shape[0]

    def probabilities(self) -> np.ndarray:
        """Softmax of the weights (max-shifted for overflow safety)."""
        z = np.exp(self.weights - self.weights.max())
        return z / z.sum()

    def sample_action(self, rng: np.random.Generator) -> int:
        """Draw a hop action in ``1..H``."""
        return int(rng.choice(self.horizon, p=self.probabilities())) + 1

    @classmethod
    def from_probabilities(cls, probs) -> "Policy":
        """Policy whose softmax reproduces ``probs`` (weights = log probs)."""
        p = np.asarray(probs, dtype=np.float64)
        if (p <= 0).any():
            raise ValueError("probabilities must be strictly positive")
        return cls(weights=np.log(p))


def write_policy(path, policy: Policy) -> None:
    """Text record: H on the first line, then H weights at full precision."""
    lines = [str(policy.horizon)] + [repr(float(w)) for w in policy.weights]
    Path(path).write_text("\n".join(lines) + "\n")


def read_policy(path) -> Policy:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    h = int(lines[0])
    weights = [float(ln) for ln in lines[1 : 1 + h]]
    if len(weights) != h:
        raise ValueError("policy file truncated")
    return Policy(weights=weights)


@dataclass
class Episode:
    """One sampling-set construction: nodes in order, realized hop per move,
    and the single episode reward (negated recovery MSE, set by the trainer)."""

    samples: SampleSet
    actions: list[int]
    reward: float | None = None


@dataclass(frozen=True)
class TrainerConfig:
    """Gradient-bandit training knobs.

    ``budget`` is the absolute sampling-set size per episode and must not
    exceed the node count of the training graph. ``early_stop_tol`` (optional)
    stops when the mean batch reward moves less than the tolerance across a
    10-batch window.
    """

    budget: int
    horizon: int = 4
    learn_rate: float = 0.1
    batch_size: int = 10
    episodes: int = 2000
    rmsprop_decay: float = 0.9
    rmsprop_eps: float = 1e-8
    early_stop_tol: float | None = None

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.learn_rate <= 0.0:
            raise ValueError("learn_rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.episodes < 0:
            raise ValueError("episodes must be >= 0")
        if not (0.0 < self.rmsprop_decay < 1.0):
            raise ValueError("rmsprop_decay must be in (0, 1)")
        if self.rmsprop_eps <= 0.0:
            raise ValueError("rmsprop_eps must be positive")


@dataclass
class TrainerState:
    """Accumulated gradient, RMSprop second moment, and episode counter."""

    grad: np.ndarray
    second_moment: np.ndarray
    episode_count: int = 0

    @classmethod
    def zeros(cls, horizon: int) -> "TrainerState":
        return cls(np.zeros(horizon), np.zeros(horizon))


# ------------------------------------------------------------------ episodes


def run_episode(
    g: Graph,
    policy: Policy,
    budget: int,
    rng: np.random.Generator,
    start: int | None = None,
) -> Episode:
    """Build one sampling set of exactly ``budget`` distinct nodes.

    The start node is uniform over V (or ``start`` if given). Each move draws
    a hop ``a`` from the policy and lands uniformly on an unsampled node at
    distance exactly ``a``. When that ring has no unsampled node the hop is
    redrawn from the policy renormalized over the hops not yet tried this
    step; once all H are exhausted the agent jumps to a nearest unsampled
    node, recording ``min(distance, H)``. The recorded action list holds the
    realized hop of every move. The reward is left unset.
    """
    n = g.node_count
    if budget > n:
        raise ValueError(f"budget {budget} exceeds node count {n}")
    if budget < 1:
        raise ValueError("budget must be >= 1")

    if start is None:
        current = int(rng.integers(n))
    else:
        current = int(start)
        if not (0 <= current < n):
            raise ValueError(f"invalid start node {start}")

    sampled = {current}
    order = [current]
    actions: list[int] = []
    h = policy.horizon
    probs = policy.probabilities()

    for _ in range(budget - 1):
        target = None
        realized = None
        untried = list(range(1, h + 1))
        while untried:
            if len(untried) == h:
                a = int(rng.choice(h, p=probs)) + 1
            else:
                sub = probs[[x - 1 for x in untried]]
                a = int(rng.choice(untried, p=sub / sub.sum()))
            untried.remove(a)
            candidates = [j for j in g.ring(current, a) if j not in sampled]
            if candidates:
                target = candidates[int(rng.integers(len(candidates)))]
                realized = a
                break
        if target is None:
            # every ring exhausted: jump to a nearest unsampled node
            dist = g.distances_from(current)
            unsampled = np.array(sorted(set(range(n)) - sampled))
            dmin = int(dist[unsampled].min())
            nearest = [int(j) for j in unsampled if dist[j] == dmin]
            target = nearest[int(rng.integers(len(nearest)))]
            realized = min(dmin, h)
        sampled.add(target)
        order.append(target)
        actions.append(realized)
        current = target

    return Episode(SampleSet(order), actions)


def episode_reward(truth: np.ndarray, recovered: np.ndarray) -> float:
    """Negated recovery MSE; 0 iff perfect recovery, otherwise negative."""
    return -mse(truth, recovered)


# ------------------------------------------------------------------ learning


def accumulate_gradient(
    state: TrainerState, policy: Policy, episode: Episode
) -> TrainerState:
    """Add the episode's policy-gradient contribution to ``state.grad``.

    The single episode reward R is shared by every recorded move: for each
    recorded hop the chosen arm gains ``R * (1 - pi(a))`` and every other arm
    loses ``R * pi(a)``, so each per-move increment sums to zero over arms.
    Increments episode_count; additive across episodes within a batch.
    """
    if episode.reward is None:
        raise ValueError("episode reward is unset")
    r = float(episode.reward)
    h = policy.horizon
    if state.grad.shape[0] != h:
        raise ValueError("state and policy horizon mismatch")
    probs = policy.probabilities()
    for a in episode.actions:
        if not (1 <= a <= h):
            raise ValueError(f"action {a} outside 1..{h}")
        state.grad -= r * probs
        state.grad[a - 1] += r
    state.episode_count += 1
    return state


def apply_batch_update(
    policy: Policy, state: TrainerState, cfg: TrainerConfig
) -> tuple[Policy, TrainerState]:
    """RMSprop-scaled gradient-ascent step; resets the batch gradient.

    second_moment <- decay * second_moment + (1 - decay) * grad**2, then
    weights += learn_rate * grad / (sqrt(second_moment) + eps). The second
    moment persists across batches.
    """
    g2 = cfg.rmsprop_decay * state.second_moment + (1.0 - cfg.rmsprop_decay) * state.grad**2
    policy.weights += cfg.learn_rate * state.grad / (np.sqrt(g2) + cfg.rmsprop_eps)
    state.second_moment = g2
    state.grad = np.zeros_like(state.grad)
    return policy, state


def train_on_graph(
    g: Graph,
    truth: np.ndarray,
    cfg: TrainerConfig,
    solver: SolverConfig,
    rng: np.random.Generator,
) -> tuple[Policy, np.ndarray]:
    """Run the episodic trainer on one graph; returns the policy and the
    per-episode reward trace."""
    truth = as_signal(truth, g.node_count)
    if cfg.budget > g.node_count:
        raise ValueError("budget exceeds node count")
    policy = Policy(cfg.horizon)
    state = TrainerState.zeros(cfg.horizon)
    rewards = np.empty(cfg.episodes, dtype=np.float64)
    batch_means: list[float] = []

    for ep in range(cfg.episodes):
        episode = run_episode(g, policy, cfg.budget, rng)
        result = recover(g, episode.samples.fill_from(truth), solver)
        episode.reward = episode_reward(truth, result.signal)
        rewards[ep] = episode.reward
        accumulate_gradient(state, policy, episode)
        if state.episode_count % cfg.batch_size == 0:
            apply_batch_update(policy, state, cfg)
            batch_means.append(float(rewards[ep + 1 - cfg.batch_size : ep + 1].mean()))
            if cfg.early_stop_tol is not None and len(batch_means) >= 20:
                recent = np.mean(batch_means[-10:])
                previous = np.mean(batch_means[-20:-10])
                if abs(recent - previous) < cfg.early_stop_tol:
                    return policy, rewards[: ep + 1]

    return policy, rewards


def mean_policy(policies: list[Policy]) -> np.ndarray:
    """Arithmetic mean of the action distributions (not of the weights)."""
    if not policies:
        raise ValueError("empty policy list")
    h = policies[0].horizon
    if any(p.horizon != h for p in policies):
        raise ValueError("policies have mismatched horizons")
    return np.mean([p.probabilities() for p in policies], axis=0)


# ------------------------------------------------------------------ baselines


def sample_urs(
    g: Graph, budget: int, rng: np.random.Generator
) -> SampleSet:
    """Uniform random sampling: ``budget`` distinct nodes without replacement."""
    if budget > g.node_count:
        raise ValueError(f"budget {budget} exceeds node count {g.node_count}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    nodes = rng.choice(g.node_count, size=budget, replace=False)
    return SampleSet(int(i) for i in nodes)


def sample_rws(
    g: Graph,
    budget: int,
    rng: np.random.Generator,
    start: int | None = None,
    max_steps: int = 1_000_000,
) -> SampleSet:
    """Random walk sampling: first visits of a simple random walk.

    Walks from a uniform start (or ``start``), moving to a uniformly chosen
    neighbor each step; every first visit joins the set until ``budget``
    distinct nodes are collected.
    """
    n = g.node_count
    if budget > n:
        raise ValueError(f"budget {budget} exceeds node count {n}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if start is None:
        current = int(rng.integers(n))
    else:
        current = int(start)
        if not (0 <= current < n):
            raise ValueError(f"invalid start node {start}")

    visited = {current}
    order = [current]
    steps = 0
    while len(order) < budget:
        if steps >= max_steps:
            raise RuntimeError(f"random walk exceeded {max_steps} steps")
        nbrs = g.neighbors(current)
        current = nbrs[int(rng.integers(len(nbrs)))]
        if current not in visited:
            visited.add(current)
            order.append(current)
        steps += 1
    return SampleSet(order)
