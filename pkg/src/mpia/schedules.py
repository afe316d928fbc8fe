"""Message schedules and the outer iteration runner.

A schedule is an ordered list of message families, each family being a
(source kind, destination kind) pair; the eight possible pairs are exactly the
eight update rules of the engine. Expanding a family over the graph yields the
individual directed sends, ordered destination-major with ascending user index
on both axes. Families read the live store sequentially: updates made by
earlier families within the same outer iteration are visible to later ones.

The regular schedule runs all eight families. The leakage-minimization
schedule runs only the four families

    g_j -> V_j,  V_j -> f_i,  f_i -> U_i,  U_i -> g_j

and together with zero initialization reproduces classic iterative leakage
minimization exactly (see ilm.reference_ilm); the remaining message families
then stay at their initialization value forever.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet
from .graph import FactorGraph, Node, build_graph, neighbors, node_key
from .linalg import random_gaussian_matrix
from .messages import (
    InnerLoopConfig,
    MessageMonitor,
    MessageStore,
    PsdMessage,
    extract_belief,
    fn_to_other_var_message,
    fn_to_own_var_message,
    var_to_fn_message,
)
from .metrics import check_feasibility, leakage

Family = tuple[str, str]

REGULAR_FAMILIES: tuple[Family, ...] = (
    ("g", "V"), ("f", "V"), ("V", "f"), ("V", "g"),
    ("f", "U"), ("g", "U"), ("U", "g"), ("U", "f"),
)
ILM_FAMILIES: tuple[Family, ...] = (("g", "V"), ("V", "f"), ("f", "U"), ("U", "g"))

_LOCAL_FAMILIES = {("U", "f"), ("f", "U"), ("V", "g"), ("g", "V")}
_VALID_FAMILIES = set(REGULAR_FAMILIES)


@dataclass(frozen=True)
class Schedule:
    """Ordered message families executed once per outer iteration."""

    name: str
    families: tuple[Family, ...]

    def __post_init__(self):
        if not self.families:
            raise ValueError("a schedule needs at least one family")
        for fam in self.families:
            if tuple(fam) not in _VALID_FAMILIES:
                raise ValueError(f"unknown message family {fam}")
        object.__setattr__(self, "families", tuple(tuple(f) for f in self.families))


def regular_schedule() -> Schedule:
    """All eight families, cross updates included."""
    return Schedule(name="regular", families=REGULAR_FAMILIES)


def ilm_schedule() -> Schedule:
    """The four-family subset equivalent to iterative leakage minimization."""
    return Schedule(name="ilm", families=ILM_FAMILIES)


def expand_family(graph: FactorGraph, family: Family) -> list[tuple[Node, Node]]:
    """Directed sends of one family: destination-major, user indices ascending."""
    src_kind, dst_kind = family
    K = graph.channels.K
    sends: list[tuple[Node, Node]] = []
    if (src_kind, dst_kind) in _LOCAL_FAMILIES:
        for i in range(K):
            sends.append(((src_kind, i), (dst_kind, i)))
        return sends
    for dst_idx in range(K):
        dst = (dst_kind, dst_idx)
        nbrs = neighbors(graph, dst)
        for src_idx in range(K):
            if src_idx == dst_idx:
                continue
            src = (src_kind, src_idx)
            if src in nbrs:
                sends.append((src, dst))
    return sends


@dataclass(frozen=True)
class RunConfig:
    """Outer-loop control knobs.

    damping blends each new message with the stored one,
    (1 - damping) * new + damping * old; the default 0.0 is the plain update.
    warm_start seeds cross-update inner loops with the previous iteration's
    belief of the inner variable instead of a fresh random point.
    """

    seed: int = 0
    init_mode: str = "zero"
    max_outer_iters: int = 1000
    leakage_tol: float = 1e-10
    inner: InnerLoopConfig = field(default_factory=InnerLoopConfig)
    warm_start: bool = True
    damping: float = 0.0

    def __post_init__(self):
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.init_mode not in ("zero", "random"):
            raise ValueError(f"init_mode must be 'zero' or 'random', got {self.init_mode!r}")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be at least 1")
        if self.leakage_tol < 0:
            raise ValueError("leakage_tol must be non-negative")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError("damping must lie in [0, 1)")


@dataclass
class IterationState:
    """Result of one runner invocation."""

    store: MessageStore
    beliefs: dict[Node, np.ndarray]
    leakage_history: list[float]
    iterations_run: int
    converged: bool
    # Per-iteration (filters, precoders) snapshots; populated only when the
    # runner is asked to record them.
    trajectory: list[tuple[list[np.ndarray], list[np.ndarray]]] | None = None

    @property
    def filters(self) -> list[np.ndarray]:
        K = self.store.graph.channels.K
        return [self.beliefs[("U", i)] for i in range(K)]

    @property
    def precoders(self) -> list[np.ndarray]:
        K = self.store.graph.channels.K
        return [self.beliefs[("V", j)] for j in range(K)]


def initialize(
    graph: FactorGraph,
    init_mode: str,
    rng: np.random.Generator,
    monitor: MessageMonitor | None = None,
) -> MessageStore:
    """Fill both directions of every edge: zeros, or random PSD forms A A^H.

    Random draws follow the stable directed-edge order (source then target,
    kind rank then index) so a given seed always produces the same store.
    """
    if init_mode not in ("zero", "random"):
        raise ValueError(f"init_mode must be 'zero' or 'random', got {init_mode!r}")
    store = MessageStore(graph, monitor=monitor)
    directed: list[tuple[Node, Node]] = []
    for var, fn in graph.edges:
        directed.append((var, fn))
        directed.append((fn, var))
    directed.sort(key=lambda e: (node_key(e[0]), node_key(e[1])))
    d = graph.channels.d
    for src, dst in directed:
        var = dst if dst[0] in ("U", "V") else src
        dim = graph.message_dim(var)
        if init_mode == "zero":
            Q = np.zeros((dim, dim), dtype=np.complex128)
        else:
            A = random_gaussian_matrix(dim, d, rng)
            Q = A @ A.conj().T
        store.put(PsdMessage(source=src, target=dst, Q=Q))
    return store


def _compute_message(
    graph: FactorGraph,
    store: MessageStore,
    src: Node,
    dst: Node,
    cfg: RunConfig,
    beliefs: dict[Node, np.ndarray],
    rng: np.random.Generator,
) -> PsdMessage:
    if src[0] in ("U", "V"):
        return var_to_fn_message(graph, store, src, dst)
    if src[1] == dst[1]:
        return fn_to_own_var_message(graph, store, src, rng)
    hub = ("U", src[1]) if src[0] == "f" else ("V", src[1])
    warm = beliefs.get(hub) if cfg.warm_start else None
    return fn_to_other_var_message(graph, store, src, dst, cfg.inner, rng, warm_start=warm)


def run(
    channels: ChannelSet,
    schedule: Schedule,
    cfg: RunConfig,
    monitor: MessageMonitor | None = None,
    record_trajectory: bool = False,
) -> IterationState:
    """Execute the schedule until convergence or the iteration budget runs out.

    One outer iteration sends every family once, then extracts all beliefs and
    records the total leakage they achieve. The run stops as soon as that
    leakage drops to leakage_tol or below. Fully deterministic given
    (channels, schedule, cfg): all randomness comes from cfg.seed.
    record_trajectory stores the per-iteration (filters, precoders) snapshots
    on the returned state at the same phase at which leakage is recorded.
    """
    graph = build_graph(channels)
    ch = channels
    if not check_feasibility(ch.K, ch.N, ch.M, ch.d):
        warnings.warn(
            f"(K, N, M, d) = ({ch.K}, {ch.N}, {ch.M}, {ch.d}) fails the counting "
            "heuristic M + N >= d (K + 1); alignment may be impossible",
            stacklevel=2,
        )
    if tuple(schedule.families) == ILM_FAMILIES and cfg.init_mode != "zero":
        warnings.warn(
            "the leakage-minimization schedule reproduces the classic baseline "
            "only with init_mode='zero'",
            stacklevel=2,
        )
    rng = np.random.default_rng(cfg.seed)
    store = initialize(graph, cfg.init_mode, rng, monitor=monitor)
    expanded = [(fam, expand_family(graph, fam)) for fam in schedule.families]
    beliefs: dict[Node, np.ndarray] = {}
    history: list[float] = []
    trajectory: list[tuple[list[np.ndarray], list[np.ndarray]]] | None = (
        [] if record_trajectory else None
    )
    converged = False
    variables = graph.variable_nodes
    for _ in range(cfg.max_outer_iters):
        for _, sends in expanded:
            for src, dst in sends:
                msg = _compute_message(graph, store, src, dst, cfg, beliefs, rng)
                if cfg.damping > 0.0:
                    old = store.form(src, dst)
                    msg = PsdMessage(
                        source=src,
                        target=dst,
                        Q=(1.0 - cfg.damping) * msg.Q + cfg.damping * old,
                    )
                store.put(msg)
        beliefs = {v: extract_belief(graph, store, v, rng) for v in variables}
        U = [beliefs[("U", i)] for i in range(ch.K)]
        V = [beliefs[("V", j)] for j in range(ch.K)]
        history.append(leakage(channels, U, V).total)
        if trajectory is not None:
            trajectory.append(([u.copy() for u in U], [v.copy() for v in V]))
        if history[-1] <= cfg.leakage_tol:
            converged = True
            break
    return IterationState(
        store=store,
        beliefs=beliefs,
        leakage_history=history,
        iterations_run=len(history),
        converged=converged,
        trajectory=trajectory,
    )
