from __future__ import annotations

import json

import numpy as np
import pytest

from graphmab.bandit import read_policy
from graphmab.experiment import (
    DESK_PROFILE,
    FULL_PROFILE,
    RESULTS_HEADER,
    absolute_budget,
    cmd_analyze,
    cmd_eval,
    cmd_generate,
    cmd_train,
    config_from_dict,
    derive_seed,
    load_config,
    make_instance,
    read_results_csv,
)
from graphmab.graph import read_graph
from graphmab.signals import read_signal


def tiny_raw(tmp_path, **overrides):
    raw = {
        "sbm": {
            "cluster_count": 2,
            "size_success_prob": 0.4,
            "intra_prob": 0.9,
            "inter_prob": 0.1,
            "max_regen_attempts": 20,
        },
        "trainer": {
            "budget": None,
            "horizon": 2,
            "learn_rate": 0.1,
            "batch_size": 5,
            "episodes": 20,
            "rmsprop_decay": 0.9,
            "rmsprop_eps": 1e-8,
            "early_stop_tol": None,
        },
        "solver": {"max_iters": 3000, "rel_tol": 1e-7},
        "train_graphs": 2,
        "test_graphs": 3,
        "budgets": [0.5],
        "train_budget_frac": 0.4,
        "master_seed": 123,
        "output_dir": str(tmp_path / "out"),
    }
    raw.update(overrides)
    return raw


class TestSeedDerivation:
    def test_frozen_values(self):
        # stable across platforms and runs (sha256 of master:role:index)
        assert derive_seed(2024, "train-graph", 0) == 15780370435896439226
        assert derive_seed(2024, "train-graph", 1) == 5223870926278148170

    def test_distinct_roles_and_indices(self):
        seeds = {
            derive_seed(7, role, i) for role in ("a", "b", "c") for i in range(50)
        }
        assert len(seeds) == 150


class TestConfig:
    def test_profiles_exist(self):
        cfg = load_config("desk")
        assert cfg.train_graphs == 20
        assert cfg.trainer.episodes == 2000
        full = load_config("full")
        assert full.train_graphs == 500
        assert full.trainer.episodes == 10000
        assert full.test_graphs == 500

    def test_file_overlay_and_overrides(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"test_graphs": 9, "trainer": {"episodes": 77}}))
        cfg = load_config("desk", path, {"master_seed": 5})
        assert cfg.test_graphs == 9
        assert cfg.trainer.episodes == 77
        assert cfg.master_seed == 5
        # untouched keys keep profile values
        assert cfg.train_graphs == DESK_PROFILE["train_graphs"]

    def test_unknown_profile(self):
        with pytest.raises(ValueError, match="unknown profile"):
            load_config("galactic")

    def test_budget_validation(self, tmp_path):
        with pytest.raises(ValueError, match="budget"):
            config_from_dict(tiny_raw(tmp_path, budgets=[1.5]))
        with pytest.raises(ValueError, match="nonempty"):
            config_from_dict(tiny_raw(tmp_path, budgets=[]))

    def test_absolute_budget_rounding(self):
        assert absolute_budget(0.2, 125) == 25
        assert absolute_budget(0.01, 10) == 1  # never below one sample
        assert absolute_budget(1.0, 7) == 7


class TestGenerate:
    def test_deterministic_bytes(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path))
        paths1 = cmd_generate(cfg, count=2)
        blobs = [p.read_bytes() for p in paths1]
        paths2 = cmd_generate(cfg, count=2)
        assert [p.read_bytes() for p in paths2] == blobs

    def test_instances_parse_back(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path))
        cmd_generate(cfg, count=1)
        g, part = read_graph(tmp_path / "out" / "graphs" / "graph_0000.txt")
        x = read_signal(tmp_path / "out" / "graphs" / "signal_0000.txt")
        assert part is not None
        assert x.shape[0] == g.node_count
        # coefficients are 1..k over the planted clusters
        assert sorted({x[i] for c in part.clusters for i in c}) == [
            float(v) for v in range(1, len(part) + 1)
        ]

    def test_matches_make_instance(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path))
        cmd_generate(cfg, count=1)
        graph, _, signal = make_instance(cfg, "generate-graph", 0)
        g2, _ = read_graph(tmp_path / "out" / "graphs" / "graph_0000.txt")
        x2 = read_signal(tmp_path / "out" / "graphs" / "signal_0000.txt")
        assert g2.edges == graph.edges
        assert (x2 == signal).all()


class TestTrain:
    def test_single_graph_mean_equals_policy(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path, train_graphs=1))
        policies, mean_probs = cmd_train(cfg)
        assert len(policies) == 1
        assert mean_probs == pytest.approx(policies[0].probabilities(), rel=1e-12)
        saved = read_policy(tmp_path / "out" / "policies" / "mean_policy.txt")
        assert saved.probabilities() == pytest.approx(mean_probs, rel=1e-12)

    def test_traces_nonpositive_and_complete(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path))
        cmd_train(cfg)
        for i in range(2):
            lines = (
                (tmp_path / "out" / "traces" / f"trace_{i:04d}.csv")
                .read_text()
                .splitlines()
            )
            assert lines[0] == "episode,reward"
            assert len(lines) == 1 + cfg.trainer.episodes
            rewards = [float(ln.split(",")[1]) for ln in lines[1:]]
            assert all(r <= 0 for r in rewards)

    def test_forced_budget_clamped(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path))
        assert cfg.forced_train_budget is None
        forced = config_from_dict(
            tiny_raw(tmp_path, trainer={**tiny_raw(tmp_path)["trainer"], "budget": 500})
        )
        assert forced.forced_train_budget == 500
        graph, _, _ = make_instance(forced, "train-graph", 0)
        from graphmab.experiment import trainer_for_graph

        assert trainer_for_graph(forced, graph).budget == graph.node_count


class TestEval:
    def test_full_budget_perfect_recovery(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path, budgets=[1.0]))
        rows = cmd_eval(cfg, mean_probs=np.array([0.5, 0.5]))
        assert len(rows) == 3
        for row in rows:
            assert row.nmse_linear == 0.0
            assert row.nmse_db == -120.0
            assert row.clamped

    def test_csv_schema_and_round_trip(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path))
        rows = cmd_eval(cfg, mean_probs=np.array([0.6, 0.4]))
        path = tmp_path / "out" / "results.csv"
        header = path.read_text().splitlines()[0]
        assert header == ",".join(RESULTS_HEADER)
        back = read_results_csv(path)
        assert [(r.method, r.budget, r.nmse_linear) for r in back] == [
            (r.method, r.budget, r.nmse_linear) for r in rows
        ]

    def test_methods_and_order(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path, budgets=[0.4, 0.8]))
        rows = cmd_eval(cfg, mean_probs=np.array([0.5, 0.5]))
        assert [(r.method, r.budget) for r in rows] == [
            ("MAB", 0.4),
            ("RWS", 0.4),
            ("URS", 0.4),
            ("MAB", 0.8),
            ("RWS", 0.8),
            ("URS", 0.8),
        ]

    def test_rerun_identical_bytes(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path))
        cmd_eval(cfg, mean_probs=np.array([0.5, 0.5]))
        first = (tmp_path / "out" / "results.csv").read_bytes()
        cmd_eval(cfg, mean_probs=np.array([0.5, 0.5]))
        assert (tmp_path / "out" / "results.csv").read_bytes() == first

    def test_eval_from_persisted_policy(self, tmp_path):
        cfg = config_from_dict(tiny_raw(tmp_path, train_graphs=1))
        _, mean_probs = cmd_train(cfg)
        rows_direct = cmd_eval(cfg, mean_probs=mean_probs)
        rows_file = cmd_eval(cfg)  # reads policies/mean_policy.txt
        assert [(r.method, r.nmse_linear) for r in rows_file] == [
            (r.method, r.nmse_linear) for r in rows_direct
        ]


class TestAnalyze:
    def test_closed_form_values(self):
        out = cmd_analyze(20, 80, 0.7, 0.01)
        assert out["equilibrium"][0] == pytest.approx(0.0597, abs=1e-4)

    def test_empirical_check(self):
        out = cmd_analyze(20, 80, 0.7, 0.01, empirical=True, walk_steps=500, trials=20, seed=3)
        assert np.abs(out["empirical"] - out["equilibrium"]).max() < 0.05

    def test_symmetric(self):
        out = cmd_analyze(50, 50, 0.7, 0.01)
        assert out["equilibrium"] == pytest.approx([0.5, 0.5], rel=1e-12)

    def test_reducible_error(self):
        with pytest.raises(ValueError):
            cmd_analyze(5, 5, 0.7, 0.0)
