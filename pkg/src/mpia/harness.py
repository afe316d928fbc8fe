"""Monte-Carlo experiment harness.

Produces the canonical artifacts: per-iteration leakage trajectories, the
final-leakage distribution with its aggregate summary, and the
distributed-deployment traffic report. All CSV output is UTF-8 with a header
row and '\n' newlines, floats serialized with repr, so identical configs and
seeds give byte-identical files.

Seeding: realization r derives its own independent sub-streams from
(master seed, r) through numpy's SeedSequence spawn keys; the channel draw and
each algorithm's internal randomness get separate children, and the channel
draw is shared by both algorithms whenever algorithm="both".
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .channel import ChannelSet, random_channel_set
from .distsim import account, default_mapping, device_role
from .graph import build_graph
from .ilm import reference_ilm
from .messages import InnerLoopConfig
from .schedules import (
    ILM_FAMILIES,
    REGULAR_FAMILIES,
    RunConfig,
    Schedule,
    run,
)

GEOMEAN_FLOOR = 1e-300

_INT_KEYS = ("K", "N", "M", "d", "max_outer_iters", "inner_max_iters", "num_realizations", "seed")
_FLOAT_KEYS = ("leakage_tol", "inner_tol")
_STR_KEYS = ("algorithm", "schedule", "init_mode", "connectivity", "output_dir")


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat experiment description; every key is also a config-file/CLI key."""

    K: int = 3
    N: int = 4
    M: int = 4
    d: int = 2
    algorithm: str = "both"
    schedule: str = "regular"
    init_mode: str = "zero"
    max_outer_iters: int = 100
    leakage_tol: float = 0.0
    inner_max_iters: int = 50
    inner_tol: float = 1e-10
    num_realizations: int = 200
    seed: int = 0
    connectivity: str | None = None
    output_dir: str = "out"

    def __post_init__(self):
        if self.algorithm not in ("mpia", "ilm", "both"):
            raise ValueError(f"algorithm must be mpia, ilm or both, got {self.algorithm!r}")
        if self.init_mode not in ("zero", "random"):
            raise ValueError(f"init_mode must be zero or random, got {self.init_mode!r}")
        if self.num_realizations < 1:
            raise ValueError("num_realizations must be at least 1")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")

    def algorithms(self) -> list[str]:
        return ["mpia", "ilm"] if self.algorithm == "both" else [self.algorithm]


@dataclass
class RealizationRecord:
    realization_id: int
    algorithm: str
    leakage_history: list[float]
    iterations_run: int
    converged: bool

    @property
    def final_leakage(self) -> float:
        return self.leakage_history[-1]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[RealizationRecord]
    files: dict[str, str] = field(default_factory=dict)
    aggregates: dict = field(default_factory=dict)


def load_config_file(path: str) -> dict[str, str]:
    """Parse a flat key-value config file: 'key = value', '#' comments."""
    values: dict[str, str] = {}
    known = {f.name for f in fields(ExperimentConfig)}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = value
    return values


def config_from_values(values: dict[str, str]) -> ExperimentConfig:
    """Coerce raw string values onto ExperimentConfig, rejecting bad ones."""
    kwargs: dict = {}
    for key, value in values.items():
        if key in _INT_KEYS:
            try:
                kwargs[key] = int(value)
            except ValueError:
                raise ValueError(f"config key {key!r} needs an integer, got {value!r}") from None
        elif key in _FLOAT_KEYS:
            try:
                kwargs[key] = float(value)
            except ValueError:
                raise ValueError(f"config key {key!r} needs a number, got {value!r}") from None
        elif key in _STR_KEYS:
            if key == "connectivity" and value == "":
                kwargs[key] = None
            else:
                kwargs[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    return ExperimentConfig(**kwargs)


def load_mask(path: str, K: int) -> np.ndarray:
    """Read a K x K 0/1 connectivity mask, one row per line."""
    rows: list[list[int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if any(tok not in ("0", "1") for tok in tokens):
                raise ValueError(f"{path}:{lineno}: mask entries must be 0 or 1")
            rows.append([int(tok) for tok in tokens])
    mask = np.array(rows, dtype=bool)
    if mask.shape != (K, K):
        raise ValueError(f"{path}: mask must be {K} x {K}, got {mask.shape}")
    return mask


def resolve_schedule(value: str) -> Schedule:
    """Map a config value to a Schedule: 'regular', 'ilm', or a family file."""
    if value == "regular":
        return Schedule(name="regular", families=REGULAR_FAMILIES)
    if value == "ilm":
        return Schedule(name="ilm", families=ILM_FAMILIES)
    families: list[tuple[str, str]] = []
    with open(value, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [tok.strip() for tok in line.replace("->", " ").split()]
            if len(parts) != 2:
                raise ValueError(f"{value}:{lineno}: expected 'src -> dst', got {raw.strip()!r}")
            families.append((parts[0], parts[1]))
    if not families:
        raise ValueError(f"{value}: schedule file defines no message families")
    return Schedule(name="custom", families=tuple(families))


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator derived from (seed, key) via SeedSequence spawn keys."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def _substream_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(entropy=seed, spawn_key=key).generate_state(1, np.uint64)[0])


def geometric_mean(values: list[float], floor: float = GEOMEAN_FLOOR) -> float:
    """exp(mean(log(max(x, floor)))); the floor guards exact zeros."""
    if not values:
        raise ValueError("geometric mean of an empty list")
    return float(math.exp(sum(math.log(max(v, floor)) for v in values) / len(values)))


def _draw_channels(cfg: ExperimentConfig, realization: int, mask: np.ndarray | None) -> ChannelSet:
    rng = substream(cfg.seed, realization, 0)
    return random_channel_set(cfg.K, cfg.N, cfg.M, cfg.d, rng, mask=mask)


def _run_algorithm(
    cfg: ExperimentConfig, channels: ChannelSet, algorithm: str, realization: int
) -> RealizationRecord:
    if algorithm == "mpia":
        run_cfg = RunConfig(
            seed=_substream_seed(cfg.seed, realization, 1),
            init_mode=cfg.init_mode,
            max_outer_iters=cfg.max_outer_iters,
            leakage_tol=cfg.leakage_tol,
            inner=InnerLoopConfig(max_inner_iters=cfg.inner_max_iters, inner_tol=cfg.inner_tol),
        )
        state = run(channels, resolve_schedule(cfg.schedule), run_cfg)
        return RealizationRecord(
            realization_id=realization,
            algorithm="mpia",
            leakage_history=list(state.leakage_history),
            iterations_run=state.iterations_run,
            converged=state.converged,
        )
    if algorithm == "ilm":
        rng = substream(cfg.seed, realization, 2)
        state = reference_ilm(channels, cfg.max_outer_iters, rng, leakage_tol=cfg.leakage_tol)
        history = list(state.leakage_history)
        converged = history[-1] <= cfg.leakage_tol
        return RealizationRecord(
            realization_id=realization,
            algorithm="ilm",
            leakage_history=history,
            iterations_run=len(history),
            converged=converged,
        )
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _mask_for(cfg: ExperimentConfig) -> np.ndarray | None:
    return load_mask(cfg.connectivity, cfg.K) if cfg.connectivity else None


def run_single(config: ExperimentConfig) -> ExperimentResult:
    """One channel realization; writes trajectory.csv with one row per iteration.

    With algorithm="both", both algorithms see the identical channel draw.
    """
    config = replace(config, num_realizations=1)
    mask = _mask_for(config)
    channels = _draw_channels(config, 0, mask)
    records = [_run_algorithm(config, channels, alg, 0) for alg in config.algorithms()]
    rows: list[list] = []
    for rec in records:
        for it, value in enumerate(rec.leakage_history, start=1):
            rows.append([rec.realization_id, rec.algorithm, it, value])
    os.makedirs(config.output_dir, exist_ok=True)
    path = os.path.join(config.output_dir, "trajectory.csv")
    _write_csv(path, ["realization_id", "algorithm", "iteration", "total_leakage"], rows)
    return ExperimentResult(config=config, records=records, files={"trajectory": path})


def run_montecarlo(config: ExperimentConfig) -> ExperimentResult:
    """num_realizations independent channel draws; distribution of final leakage.

    Writes final_leakage.csv (one row per realization per algorithm) and
    aggregate.json with geometric means and ECDF coordinates per algorithm.
    """
    mask = _mask_for(config)
    records: list[RealizationRecord] = []
    for r in range(config.num_realizations):
        channels = _draw_channels(config, r, mask)
        for alg in config.algorithms():
            records.append(_run_algorithm(config, channels, alg, r))
    rows = [
        [rec.realization_id, rec.algorithm, rec.final_leakage, rec.iterations_run, rec.converged]
        for rec in records
    ]
    os.makedirs(config.output_dir, exist_ok=True)
    csv_path = os.path.join(config.output_dir, "final_leakage.csv")
    _write_csv(
        csv_path,
        ["realization_id", "algorithm", "final_leakage", "iterations_run", "converged"],
        rows,
    )
    aggregates: dict = {}
    for alg in config.algorithms():
        finals = [rec.final_leakage for rec in records if rec.algorithm == alg]
        finals_sorted = sorted(finals)
        n = len(finals_sorted)
        aggregates[alg] = {
            "num_realizations": n,
            "geometric_mean_final_leakage": geometric_mean(finals),
            "median_final_leakage": float(np.median(finals_sorted)),
            "converged_fraction": sum(
                1 for rec in records if rec.algorithm == alg and rec.converged
            ) / n,
            "mean_iterations_run": sum(
                rec.iterations_run for rec in records if rec.algorithm == alg
            ) / n,
            "ecdf": {
                "final_leakage": finals_sorted,
                "probability": [(k + 1) / n for k in range(n)],
            },
        }
    json_path = os.path.join(config.output_dir, "aggregate.json")
    with open(json_path, "w", encoding="utf-8", newline="") as fh:
        json.dump(aggregates, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ExperimentResult(
        config=config,
        records=records,
        files={"final_leakage": csv_path, "aggregate": json_path},
        aggregates=aggregates,
    )


def run_distsim_report(config: ExperimentConfig) -> ExperimentResult:
    """Traffic accounting for the configured schedule and topology.

    Purely combinatorial: channel values are irrelevant, only the mask and the
    schedule shape matter. Writes traffic.csv.
    """
    mask = _mask_for(config)
    H = np.zeros((config.K, config.K, config.N, config.M), dtype=np.complex128)
    channels = ChannelSet(K=config.K, N=config.N, M=config.M, d=config.d, H=H, mask=mask)
    graph = build_graph(channels)
    schedule = resolve_schedule(config.schedule)
    mapping = default_mapping(config.K)
    report = account(graph, schedule, mapping, config.max_outer_iters)
    rows: list[list] = []
    for device, traffic in report.per_device.items():
        per_message = traffic.bytes_ota // traffic.messages_ota if traffic.messages_ota else 0
        rows.append(
            [
                device,
                device_role(device),
                traffic.messages_ota,
                traffic.bytes_ota,
                traffic.messages_local,
                per_message,
            ]
        )
    os.makedirs(config.output_dir, exist_ok=True)
    path = os.path.join(config.output_dir, "traffic.csv")
    _write_csv(
        path,
        ["device", "role", "messages_ota", "bytes_ota", "messages_local", "bytes_per_message"],
        rows,
    )
    result = ExperimentResult(config=config, records=[], files={"traffic": path})
    result.aggregates = {
        "iterations": report.iterations,
        "total_messages_ota": report.totals.messages_ota,
        "total_bytes_ota": report.totals.bytes_ota,
        "total_messages_local": report.totals.messages_local,
        "per_iteration_messages_ota": sum(
            t.messages_ota for t in report.per_iteration.values()
        ),
        "per_iteration_messages_local": sum(
            t.messages_local for t in report.per_iteration.values()
        ),
    }
    return result
