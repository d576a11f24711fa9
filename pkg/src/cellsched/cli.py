"""Command-line entry point for running the scheduling experiments.

Subcommands:
  run            strategy ranking table (logALPT/ALPT mean +/- std per strategy)
  sweep-linear   logALPT curve of the linear index I_tas + alpha * I_das
  sweep-prob     logALPT surface of the probabilistic {T, tas, das} mixture
  dump-workload  CSV of the generated arrival stream for the base seed
  trace          per-slot service trace of one run of the first strategy

Configuration comes from an optional YAML file (--config); --seed,
--replications, and --out override it.  Without a config the reference
setup is used.  Exit code 0 on success, 2 on any expected error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from .errors import CellschedError
from .experiments import (
    ExperimentConfig,
    default_experiment_config,
    experiment_from_dict,
    git_blob_sha1,
    run_experiment,
    sweep_linear,
    sweep_probabilistic,
    write_curve_csv,
    write_manifest,
    write_ranking_csv,
    write_surface_csv,
    write_trace_csv,
    write_workload_csv,
)
from .simcore import run_simulation
from .strategies import StrategySpec
from .workload import generate_workload


def load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        return default_experiment_config()
    with open(path) as handle:
        data = yaml.safe_load(handle) or {}
    if not isinstance(data, dict):
        raise CellschedError(f"config file {path} must hold a mapping")
    return experiment_from_dict(data)


def apply_overrides(config: ExperimentConfig, args) -> ExperimentConfig:
    if args.seed is not None:
        config = replace(config, base_seed=args.seed)
    if args.replications is not None:
        config = replace(config, replications=args.replications)
    if args.out is not None:
        config = replace(config, output=args.out)
    return config


def output_dir(config: ExperimentConfig) -> Path:
    return Path(config.output if config.output is not None else "results")


def _pm(mean: float, std: float) -> str:
    return f"{mean:8.3f} ± {std:.3f}"


def cmd_run(config: ExperimentConfig) -> int:
    scores = run_experiment(config)
    width = max((len(s.label) for s in scores), default=8)
    print(f"{'strategy':<{width}}  {'logALPT':>16}  {'ALPT':>16}")
    for s in scores:
        print(
            f"{s.label:<{width}}  "
            f"{_pm(s.score.log_alpt_mean, s.score.log_alpt_std)}  "
            f"{_pm(s.score.alpt_mean, s.score.alpt_std)}"
        )
    out = output_dir(config)
    data = write_ranking_csv(out / "ranking.csv", scores)
    write_manifest(out, "ranking", config, {"ranking.csv": git_blob_sha1(data)})
    print(f"wrote {out / 'ranking.csv'}")
    return 0


def cmd_sweep_linear(config: ExperimentConfig) -> int:
    curve = sweep_linear(config)
    best_alpha, best = max(curve, key=lambda row: row[1].log_alpt_mean)
    for alpha, agg in curve:
        print(f"alpha={alpha:<5g} logALPT {_pm(agg.log_alpt_mean, agg.log_alpt_std)}")
    print(f"best alpha: {best_alpha:g} (logALPT {best.log_alpt_mean:.3f})")
    out = output_dir(config)
    data = write_curve_csv(out / "linear_sweep.csv", curve)
    write_manifest(
        out, "sweep-linear", config, {"linear_sweep.csv": git_blob_sha1(data)}
    )
    print(f"wrote {out / 'linear_sweep.csv'}")
    return 0


def cmd_sweep_prob(config: ExperimentConfig) -> int:
    surface = sweep_probabilistic(config)
    best_p, best = max(surface, key=lambda row: row[1].log_alpt_mean)
    for point, agg in surface:
        print(
            f"p=({point[0]:.1f},{point[1]:.1f},{point[2]:.1f}) "
            f"logALPT {_pm(agg.log_alpt_mean, agg.log_alpt_std)}"
        )
    print(
        f"best mixture: (p_t,p_tas,p_das)=({best_p[0]:g},{best_p[1]:g},{best_p[2]:g})"
        f" (logALPT {best.log_alpt_mean:.3f})"
    )
    out = output_dir(config)
    data = write_surface_csv(out / "prob_sweep.csv", surface)
    write_manifest(out, "sweep-prob", config, {"prob_sweep.csv": git_blob_sha1(data)})
    print(f"wrote {out / 'prob_sweep.csv'}")
    return 0


def cmd_dump_workload(config: ExperimentConfig) -> int:
    workload = replace(config.sim.workload, seed=config.base_seed)
    flows = generate_workload(workload)
    out = output_dir(config)
    data = write_workload_csv(out / "workload.csv", flows)
    write_manifest(out, "dump-workload", config, {"workload.csv": git_blob_sha1(data)})
    print(f"wrote {out / 'workload.csv'} ({len(flows)} flows)")
    return 0


def cmd_trace(config: ExperimentConfig) -> int:
    strategy = config.strategies[0] if config.strategies else StrategySpec(kind="T")
    workload = replace(config.sim.workload, seed=config.base_seed)
    sim = replace(config.sim, workload=workload, strategy=strategy)
    result = run_simulation(sim, collect_trace=True)
    out = output_dir(config)
    data = write_trace_csv(out / "trace.csv", result.trace)
    write_manifest(out, "trace", config, {"trace.csv": git_blob_sha1(data)})
    print(
        f"wrote {out / 'trace.csv'} ({len(result.trace)} slots, "
        f"{len(result.records)} completions, strategy {strategy.label()})"
    )
    return 0


_COMMANDS = {
    "run": cmd_run,
    "sweep-linear": cmd_sweep_linear,
    "sweep-prob": cmd_sweep_prob,
    "dump-workload": cmd_dump_workload,
    "trace": cmd_trace,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellsched",
        description="Slot-based downlink scheduling experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", help="YAML experiment config")
        p.add_argument("--seed", type=int, help="base replication seed")
        p.add_argument("--replications", type=int, help="replication count")
        p.add_argument("--out", help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = apply_overrides(load_config(args.config), args)
        return _COMMANDS[args.command](config)
    except (CellschedError, OSError, yaml.YAMLError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
