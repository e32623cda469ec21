"""Benchmark orchestration: graph-family generation, multi-graph training,
and mean-policy evaluation against random-walk and uniform baselines.

The whole pipeline is a pure function of (config, master seed). Every random
stream is seeded by hashing the master seed with a role string and an index,
so per-graph work can be parallelized or rerun in any order without changing
results; aggregation is always done in index order.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import chain
from .bandit import (
    Policy,
    TrainerConfig,
    mean_policy,
    read_policy,
    run_episode,
    sample_rws,
    sample_urs,
    train_on_graph,
    write_policy,
)
from .graph import Graph, Partition, SbmConfig, sbm_generate, write_graph
from .recovery import SolverConfig, recover
from .signals import (
    ClusteredSignalSpec,
    db_clamped,
    nmse,
    realize,
    to_db,
    write_signal,
)

METHODS = ("MAB", "RWS", "URS")

RESULTS_HEADER = ["method", "budget", "nmse_linear", "nmse_db", "graphs", "seed"]


def derive_seed(master_seed: int, role: str, index: int = 0) -> int:
    """Stable 64-bit sub-seed from the master seed, a role string, and an index."""
    digest = hashlib.sha256(f"{master_seed}:{role}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def derive_rng(master_seed: int, role: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, role, index))


def absolute_budget(relative: float, node_count: int) -> int:
    """Relative budget in (0, 1] to a per-graph sample count, at least 1."""
    if not (0.0 < relative <= 1.0):
        raise ValueError(f"relative budget must be in (0, 1], got {relative}")
    return max(1, min(node_count, round(relative * node_count)))


@dataclass(frozen=True)
class ExperimentConfig:
    sbm: SbmConfig
    trainer: TrainerConfig
    solver: SolverConfig
    train_graphs: int
    test_graphs: int
    budgets: tuple[float, ...]
    master_seed: int
    output_dir: Path
    train_budget_frac: float = 0.2
    nmse_floor_db: float = -120.0
    # Absolute training budget override; None derives it per graph from
    # train_budget_frac (training graphs have random sizes).
    forced_train_budget: int | None = None

    def __post_init__(self) -> None:
        if self.train_graphs < 1 or self.test_graphs < 1:
            raise ValueError("train_graphs and test_graphs must be >= 1")
        if not self.budgets:
            raise ValueError("budgets must be nonempty")
        for b in self.budgets:
            if not (0.0 < b <= 1.0):
                raise ValueError(f"budget {b} outside (0, 1]")
        if not (0.0 < self.train_budget_frac <= 1.0):
            raise ValueError("train_budget_frac must be in (0, 1]")


# ------------------------------------------------------------------ profiles

# Desk-scale profile: small enough for a single machine run; the full-scale
# protocol (500 graphs x 10000 episodes x 500 test graphs) sits behind the
# "full" profile.
DESK_PROFILE: dict = {
    "sbm": {
        "cluster_count": 10,
        "size_success_prob": 0.08,
        "intra_prob": 0.7,
        "inter_prob": 0.01,
        "max_regen_attempts": 20,
    },
    "trainer": {
        "budget": None,
        "horizon": 4,
        "learn_rate": 0.1,
        "batch_size": 10,
        "episodes": 2000,
        "rmsprop_decay": 0.9,
        "rmsprop_eps": 1e-8,
        "early_stop_tol": None,
    },
    "solver": {"max_iters": 6000, "rel_tol": 1e-6},
    "train_graphs": 20,
    "test_graphs": 100,
    "budgets": [0.1, 0.2, 0.3, 0.4],
    "train_budget_frac": 0.2,
    "master_seed": 2024,
    "output_dir": "runs/desk",
    "nmse_floor_db": -120.0,
}

FULL_PROFILE: dict = {
    **DESK_PROFILE,
    "trainer": {**DESK_PROFILE["trainer"], "episodes": 10000},
    "train_graphs": 500,
    "test_graphs": 500,
    "output_dir": "runs/full",
}

PROFILES = {"desk": DESK_PROFILE, "full": FULL_PROFILE}


def _deep_update(base: dict, overlay: dict) -> dict:
    out = dict(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_update(out[key], value)
        else:
            out[key] = value
    return out


def config_from_dict(raw: dict) -> ExperimentConfig:
    trainer_raw = dict(raw["trainer"])
    # budget is filled per graph from train_budget_frac unless forced here
    forced_budget = trainer_raw.pop("budget", None)
    trainer = TrainerConfig(budget=forced_budget or 1, **trainer_raw)
    return ExperimentConfig(
        sbm=SbmConfig(**raw["sbm"]),
        trainer=trainer,
        solver=SolverConfig(**raw["solver"]),
        train_graphs=int(raw["train_graphs"]),
        test_graphs=int(raw["test_graphs"]),
        budgets=tuple(float(b) for b in raw["budgets"]),
        master_seed=int(raw["master_seed"]),
        output_dir=Path(raw["output_dir"]),
        train_budget_frac=float(raw.get("train_budget_frac", 0.2)),
        nmse_floor_db=float(raw.get("nmse_floor_db", -120.0)),
        forced_train_budget=None if forced_budget is None else int(forced_budget),
    )


def load_config(
    profile: str = "desk",
    config_path=None,
    overrides: dict | None = None,
) -> ExperimentConfig:
    """Profile defaults, overlaid by the JSON config file, then by overrides."""
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; have {sorted(PROFILES)}")
    raw = dict(PROFILES[profile])
    if config_path is not None:
        file_raw = json.loads(Path(config_path).read_text())
        raw = _deep_update(raw, file_raw)
    if overrides:
        raw = _deep_update(raw, {k: v for k, v in overrides.items() if v is not None})
    return config_from_dict(raw)


def trainer_for_graph(cfg: ExperimentConfig, g: Graph) -> TrainerConfig:
    if cfg.forced_train_budget is not None:
        budget = min(cfg.forced_train_budget, g.node_count)
    else:
        budget = absolute_budget(cfg.train_budget_frac, g.node_count)
    return dataclasses.replace(cfg.trainer, budget=budget)


# ------------------------------------------------------------------ pipeline


def make_instance(
    cfg: ExperimentConfig, role: str, index: int
) -> tuple[Graph, Partition, np.ndarray]:
    """One clustered-graph instance: SBM draw plus the signal with
    coefficients 1..k over the planted clusters."""
    rng = derive_rng(cfg.master_seed, role, index)
    graph, partition = sbm_generate(cfg.sbm, rng)
    coefficients = [float(l + 1) for l in range(len(partition))]
    signal = realize(ClusteredSignalSpec(partition, coefficients))
    return graph, partition, signal


def cmd_generate(cfg: ExperimentConfig, count: int | None = None) -> list[Path]:
    """Write ``count`` graph/signal instances under ``output_dir/graphs``."""
    count = cfg.train_graphs if count is None else int(count)
    out = Path(cfg.output_dir) / "graphs"
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        graph, partition, signal = make_instance(cfg, "generate-graph", i)
        gpath = out / f"graph_{i:04d}.txt"
        spath = out / f"signal_{i:04d}.txt"
        write_graph(gpath, graph, partition)
        write_signal(spath, signal)
        paths += [gpath, spath]
    return paths


def cmd_train(cfg: ExperimentConfig) -> tuple[list[Policy], np.ndarray]:
    """Train one policy per training graph; persist policies, the mean
    policy, and per-episode reward traces. Returns (policies, mean distribution)."""
    pol_dir = Path(cfg.output_dir) / "policies"
    trace_dir = Path(cfg.output_dir) / "traces"
    pol_dir.mkdir(parents=True, exist_ok=True)
    trace_dir.mkdir(parents=True, exist_ok=True)

    policies: list[Policy] = []
    for i in range(cfg.train_graphs):
        graph, _, signal = make_instance(cfg, "train-graph", i)
        trainer = trainer_for_graph(cfg, graph)
        rng = derive_rng(cfg.master_seed, "train-episodes", i)
        policy, trace = train_on_graph(graph, signal, trainer, cfg.solver, rng)
        policies.append(policy)
        write_policy(pol_dir / f"policy_{i:04d}.txt", policy)
        with open(trace_dir / f"trace_{i:04d}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["episode", "reward"])
            for ep, reward in enumerate(trace):
                writer.writerow([ep, repr(float(reward))])

    mean_probs = mean_policy(policies)
    write_policy(pol_dir / "mean_policy.txt", Policy.from_probabilities(mean_probs))
    return policies, mean_probs


@dataclass(frozen=True)
class ResultRow:
    method: str
    budget: float
    nmse_linear: float
    nmse_db: float
    graphs: int
    seed: int
    clamped: bool = False

    def csv_record(self) -> list[str]:
        return [
            self.method,
            repr(self.budget),
            repr(self.nmse_linear),
            repr(self.nmse_db),
            str(self.graphs),
            str(self.seed),
        ]


def _sample_for_method(method, graph, mean_pol, budget, rng):
    if method == "MAB":
        return run_episode(graph, mean_pol, budget, rng).samples
    if method == "RWS":
        return sample_rws(graph, budget, rng)
    if method == "URS":
        return sample_urs(graph, budget, rng)
    raise ValueError(f"unknown method {method!r}")


def cmd_eval(
    cfg: ExperimentConfig, policy_path=None, mean_probs=None
) -> list[ResultRow]:
    """Evaluate the frozen mean policy against RWS and URS on fresh instances.

    One sampling episode per (method, budget, test graph); NMSE is averaged
    in the linear domain and converted to dB once. Writes
    ``output_dir/results.csv`` and returns the rows.
    """
    if mean_probs is None:
        if policy_path is None:
            policy_path = Path(cfg.output_dir) / "policies" / "mean_policy.txt"
        mean_pol = read_policy(policy_path)
    else:
        mean_pol = Policy.from_probabilities(mean_probs)

    instances = []
    for i in range(cfg.test_graphs):
        graph, _, signal = make_instance(cfg, "eval-graph", i)
        instances.append((graph, signal))

    rows: list[ResultRow] = []
    for jb, budget in enumerate(cfg.budgets):
        for method in METHODS:
            errors = np.empty(cfg.test_graphs)
            for i, (graph, signal) in enumerate(instances):
                m = absolute_budget(budget, graph.node_count)
                rng = derive_rng(cfg.master_seed, f"eval/{method}/b{jb}", i)
                samples = _sample_for_method(method, graph, mean_pol, m, rng)
                result = recover(graph, samples.fill_from(signal), cfg.solver)
                errors[i] = nmse(signal, result.signal)
            linear = float(errors.mean())
            rows.append(
                ResultRow(
                    method=method,
                    budget=float(budget),
                    nmse_linear=linear,
                    nmse_db=to_db(linear, cfg.nmse_floor_db),
                    graphs=cfg.test_graphs,
                    seed=cfg.master_seed,
                    clamped=db_clamped(linear, cfg.nmse_floor_db),
                )
            )

    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(out / "results.csv", rows)
    return rows


def write_results_csv(path, rows: list[ResultRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for row in rows:
            writer.writerow(row.csv_record())


def read_results_csv(path) -> list[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != RESULTS_HEADER:
            raise ValueError(f"unexpected results header {header}")
        return [
            ResultRow(
                method=rec[0],
                budget=float(rec[1]),
                nmse_linear=float(rec[2]),
                nmse_db=float(rec[3]),
                graphs=int(rec[4]),
                seed=int(rec[5]),
            )
            for rec in reader
        ]


def cmd_analyze(
    n1: int,
    n2: int,
    p: float,
    q: float,
    empirical: bool = False,
    walk_steps: int = 2000,
    trials: int = 50,
    seed: int = 0,
) -> dict:
    """Closed-form two-cluster chain summary, optionally checked against a
    Monte Carlo walk on a fresh SBM draw."""
    summary = chain.analyze(chain.TwoClusterModel(n1, n2, p, q))
    out = {
        "transition": summary.transition,
        "equilibrium": summary.equilibrium,
    }
    if empirical:
        cfg = SbmConfig(
            cluster_count=2,
            size_success_prob=0.5,
            intra_prob=p,
            inter_prob=q,
        )
        rng = np.random.default_rng(derive_seed(seed, "analyze-empirical"))
        graph, partition = sbm_generate(cfg, rng, cluster_sizes=[n1, n2])
        out["empirical"] = chain.empirical_occupancy(
            graph, partition, walk_steps, trials, rng
        )
    return out
