"""Command-line front end.

Three subcommands mirror the harness entry points:

    mpia run-single      --output-dir out [--seed 7 --algorithm both ...]
    mpia run-montecarlo  --num-realizations 200 --max-outer-iters 100 ...
    mpia distsim-report  --schedule ilm --max-outer-iters 100 ...

Every ExperimentConfig key is available both as a '--key value' flag (dashes
for underscores) and as a 'key = value' line in a file passed via --config;
flags override the file, the file overrides built-in defaults. Exit status is
0 on success and nonzero on configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from .harness import (
    ExperimentConfig,
    config_from_values,
    load_config_file,
    run_distsim_report,
    run_montecarlo,
    run_single,
)

_HELP = {
    "K": "number of users",
    "N": "receive antennas per user",
    "M": "transmit antennas per user",
    "d": "streams per user",
    "algorithm": "mpia, ilm or both",
    "schedule": "regular, ilm, or path to a schedule file",
    "init_mode": "zero or random message initialization",
    "max_outer_iters": "outer iteration budget",
    "leakage_tol": "stop once total leakage reaches this value",
    "inner_max_iters": "iteration cap for cross-update inner loops",
    "inner_tol": "absolute decrease threshold for cross-update inner loops",
    "num_realizations": "number of Monte-Carlo channel draws",
    "seed": "master seed; realizations derive sub-streams from it",
    "connectivity": "path to a K x K 0/1 mask file (default: fully connected)",
    "output_dir": "directory for CSV/JSON outputs",
}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="key = value config file")
    for f in fields(ExperimentConfig):
        flag = "--" + f.name.replace("_", "-")
        parser.add_argument(flag, dest=f.name, metavar="VALUE", help=_HELP[f.name])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpia",
        description="Interference alignment by message passing: experiment harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("run-single", "one channel realization, per-iteration leakage trajectory"),
        ("run-montecarlo", "final-leakage distribution over many realizations"),
        ("distsim-report", "over-the-air traffic accounting for a schedule"),
    ):
        p = sub.add_parser(name, help=doc)
        _add_config_flags(p)
    return parser


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values: dict[str, str] = {}
    if args.config:
        values.update(load_config_file(args.config))
    for f in fields(ExperimentConfig):
        cli_value = getattr(args, f.name)
        if cli_value is not None:
            values[f.name] = cli_value
    return config_from_values(values)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve_config(args)
        if args.command == "run-single":
            result = run_single(config)
            for rec in result.records:
                print(
                    f"{rec.algorithm}: final_leakage={rec.final_leakage!r} "
                    f"iterations={rec.iterations_run} converged={rec.converged}"
                )
        elif args.command == "run-montecarlo":
            result = run_montecarlo(config)
            for alg, agg in result.aggregates.items():
                print(
                    f"{alg}: geometric_mean_final_leakage="
                    f"{agg['geometric_mean_final_leakage']!r} "
                    f"over {agg['num_realizations']} realizations"
                )
        else:
            result = run_distsim_report(config)
            agg = result.aggregates
            print(
                f"{config.schedule} schedule, K={config.K}, "
                f"{agg['iterations']} iterations: "
                f"{agg['total_messages_ota']} over-the-air messages, "
                f"{agg['total_bytes_ota']} bytes, "
                f"{agg['total_messages_local']} local messages"
            )
        for label, path in result.files.items():
            print(f"wrote {label}: {path}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
