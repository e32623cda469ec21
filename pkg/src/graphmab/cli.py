"""Command-line entry points: generate, train, eval, analyze."""

from __future__ import annotations

import argparse
import sys

from .experiment import PROFILES, cmd_analyze, cmd_eval, cmd_generate, cmd_train, load_config
from .kernels import solver_backend


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file overlaying the profile")
    parser.add_argument(
        "--profile", default="desk", choices=sorted(PROFILES), help="base defaults"
    )
    parser.add_argument("--seed", type=int, help="override master_seed")
    parser.add_argument("--out", help="override output_dir")
    parser.add_argument(
        "--budgets", help="override relative budgets, comma separated (e.g. 0.2,0.4)"
    )
    parser.add_argument("--episodes", type=int, help="override trainer episodes")
    parser.add_argument("--graphs", type=int, help="override graph count")


def _config_from_args(args, graphs_key: str):
    overrides: dict = {
        "master_seed": args.seed,
        "output_dir": args.out,
    }
    if args.budgets is not None:
        overrides["budgets"] = [float(tok) for tok in args.budgets.split(",") if tok]
    if args.episodes is not None:
        overrides["trainer"] = {"episodes": args.episodes}
    if args.graphs is not None:
        overrides[graphs_key] = args.graphs
    return load_config(args.profile, args.config, overrides)


def _run_generate(args) -> int:
    cfg = _config_from_args(args, "train_graphs")
    paths = cmd_generate(cfg, count=args.graphs)
    print(f"wrote {len(paths)} files under {cfg.output_dir}/graphs")
    return 0


def _run_train(args) -> int:
    cfg = _config_from_args(args, "train_graphs")
    policies, mean_probs = cmd_train(cfg)
    noun = "policy" if len(policies) == 1 else "policies"
    print(f"trained {len(policies)} {noun}; mean policy over hops 1..{len(mean_probs)}:")
    print("  " + " ".join(f"{p:.4f}" for p in mean_probs))
    print(f"policies and traces under {cfg.output_dir}")
    return 0


def _run_eval(args) -> int:
    cfg = _config_from_args(args, "test_graphs")
    rows = cmd_eval(cfg, policy_path=args.policy)
    print(f"solver backend: {solver_backend()}")
    print(f"{'method':<8}{'budget':<10}{'nmse_db':<14}nmse_linear")
    for row in rows:
        mark = " (clamped)" if row.clamped else ""
        print(
            f"{row.method:<8}{row.budget:<10g}{row.nmse_db:<14.4f}"
            f"{row.nmse_linear:.6e}{mark}"
        )
    print(f"results written to {cfg.output_dir}/results.csv")
    return 0


def _run_analyze(args) -> int:
    out = cmd_analyze(
        args.n1,
        args.n2,
        args.p,
        args.q,
        empirical=args.empirical,
        walk_steps=args.walk_steps,
        trials=args.trials,
        seed=args.seed if args.seed is not None else 0,
    )
    t = out["transition"]
    v = out["equilibrium"]
    print("transition matrix:")
    print(f"  [{t[0, 0]:.6f} {t[0, 1]:.6f}]")
    print(f"  [{t[1, 0]:.6f} {t[1, 1]:.6f}]")
    print(f"equilibrium: v1={v[0]:.6f} v2={v[1]:.6f}")
    if "empirical" in out:
        emp = out["empirical"]
        print("empirical occupancy: " + " ".join(f"{f:.6f}" for f in emp))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphmab",
        description="Learn graph-signal sampling policies with a gradient "
        "bandit and benchmark them against random-walk and uniform sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write graph/signal instances")
    _add_common(p_gen)
    p_gen.set_defaults(func=_run_generate)

    p_train = sub.add_parser("train", help="train per-graph policies and the mean policy")
    _add_common(p_train)
    p_train.set_defaults(func=_run_train)

    p_eval = sub.add_parser("eval", help="evaluate MAB/RWS/URS NMSE across budgets")
    _add_common(p_eval)
    p_eval.add_argument("--policy", help="mean policy file (default: from output_dir)")
    p_eval.set_defaults(func=_run_eval)

    p_an = sub.add_parser("analyze", help="two-cluster random-walk chain analysis")
    _add_common(p_an)
    p_an.add_argument("--n1", type=int, default=20)
    p_an.add_argument("--n2", type=int, default=80)
    p_an.add_argument("--p", type=float, default=0.7)
    p_an.add_argument("--q", type=float, default=0.01)
    p_an.add_argument("--empirical", action="store_true", help="Monte Carlo check on an SBM draw")
    p_an.add_argument("--walk-steps", type=int, default=2000)
    p_an.add_argument("--trials", type=int, default=50)
    p_an.set_defaults(func=_run_analyze)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # CLI boundary: diagnostic line, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
