"""Min-sum message passing with quadratic-form messages.

Every message on the factor graph is a Hermitian positive semidefinite matrix
Q, standing for the quadratic penalty m(X) = tr(X^H Q X) that the sender
believes the receiving variable should pay. Variable-to-function updates are
exact sums of incoming forms. Function-to-variable updates would in general
produce non-quadratic messages, so they re-quadraticize: the incoming forms are
collapsed onto their weakest d-dimensional subspaces (nu_min) and the resulting
interference covariance is sent instead. Terms proportional to the identity are
dropped throughout; they shift every candidate subspace equally and cannot
change any minimizer.

The cross update (function node to a variable of another user) additionally
runs a small alternating minimization: the sender optimizes its own user's
matrix and all third-party matrices against the incoming forms before
summarizing the result for the target. Each step of that alternation is an
exact block minimization of

    chi = tr(hub^H Q_hub hub) + sum_k tr(p_k^H Q_k p_k)
          + 1/2 sum_k ||p_k^H G_k hub||_F^2

over one block, so chi is non-negative and non-increasing across rounds; the
loop stops when the decrease falls below inner_tol.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import FactorGraph, Node, is_variable, neighbors
from .linalg import (
    HERMITIAN_TOL,
    PSD_REL_TOL,
    hermitian_deviation,
    hermitize,
    nu_min,
    random_truncated_unitary,
)

Edge = tuple[Node, Node]


class MissingMessageError(KeyError):
    """An update rule needed a message that was never initialized."""


@dataclass(frozen=True)
class PsdMessage:
    """Directed message source -> target carrying the PSD form Q."""

    source: Node
    target: Node
    Q: np.ndarray


@dataclass(frozen=True)
class InnerLoopConfig:
    """Stopping control for the cross-update alternating minimization."""

    max_inner_iters: int = 50
    inner_tol: float = 1e-10

    def __post_init__(self):
        if self.max_inner_iters < 1:
            raise ValueError("max_inner_iters must be at least 1")
        if self.inner_tol < 0:
            raise ValueError("inner_tol must be non-negative")


@dataclass
class MessageMonitor:
    """Optional collector for numerical invariants of every stored message.

    Deviations are recorded relative to max(1, ||Q||_F) (hermiticity) and
    max(1, lambda_max) (eigenvalue floor). Cross-message numerical rank counts
    eigenvalues above 1e-9 * max(1, lambda_max).
    """

    messages_seen: int = 0
    max_hermitian_dev: float = 0.0
    min_eig_rel: float = 0.0
    cross_messages: int = 0
    cross_rank_max: int = 0
    inner_steps: int = 0
    max_inner_increase: float = float("-inf")

    def observe_message(self, Q_raw: np.ndarray, eigs: np.ndarray, cross: bool) -> None:
        self.messages_seen += 1
        scale = max(1.0, float(np.linalg.norm(Q_raw)))
        self.max_hermitian_dev = max(self.max_hermitian_dev, hermitian_deviation(Q_raw) / scale)
        floor = max(1.0, float(eigs[-1]))
        self.min_eig_rel = min(self.min_eig_rel, float(eigs[0]) / floor)
        if cross:
            self.cross_messages += 1
            rank = int(np.count_nonzero(eigs > 1e-9 * floor))
            self.cross_rank_max = max(self.cross_rank_max, rank)

    def observe_inner(self, objective_delta: float) -> None:
        # Positive delta means the inner objective went UP between rounds.
        self.inner_steps += 1
        self.max_inner_increase = max(self.max_inner_increase, objective_delta)


class MessageStore:
    """All directed messages of one run, two per undirected edge.

    put() applies the numerical hygiene contract: the stored form is the
    Hermitian part (Q + Q^H) / 2, and eigenvalues below the PSD floor raise a
    warning rather than being clamped.
    """

    def __init__(self, graph: FactorGraph, monitor: MessageMonitor | None = None):
        self.graph = graph
        self.monitor = monitor
        self._data: dict[Edge, PsdMessage] = {}

    def __contains__(self, edge: Edge) -> bool:
        return edge in self._data

    def __len__(self) -> int:
        return len(self._data)

    def directed_edges(self) -> list[Edge]:
        return list(self._data)

    def get(self, source: Node, target: Node) -> PsdMessage:
        try:
            return self._data[(source, target)]
        except KeyError:
            raise MissingMessageError(
                f"message {source} -> {target} has not been initialized"
            ) from None

    def form(self, source: Node, target: Node) -> np.ndarray:
        return self.get(source, target).Q

    def put(self, message: PsdMessage) -> None:
        src, dst = message.source, message.target
        var = dst if is_variable(dst) else src
        if not is_variable(var) or is_variable(src) == is_variable(dst):
            raise ValueError(f"edge {src} -> {dst} does not join a variable and a function")
        if src not in neighbors(self.graph, dst):
            raise ValueError(f"no edge between {src} and {dst} in the graph")
        dim = self.graph.message_dim(var)
        if message.Q.shape != (dim, dim):
            raise ValueError(
                f"message {src} -> {dst} must be {dim} x {dim}, got {message.Q.shape}"
            )
        Q = hermitize(message.Q)
        eigs = np.linalg.eigvalsh(Q)
        if eigs[0] < -PSD_REL_TOL * max(1.0, float(eigs[-1])):
            warnings.warn(
                f"message {src} -> {dst} has eigenvalue {eigs[0]:.3e} below the PSD floor",
                stacklevel=2,
            )
        if self.monitor is not None:
            cross = (not is_variable(src)) and src[1] != dst[1]
            self.monitor.observe_message(message.Q, eigs, cross)
        self._data[(src, dst)] = PsdMessage(source=src, target=dst, Q=Q)


def _incoming_sum(
    graph: FactorGraph, store: MessageStore, var: Node, exclude: Node | None
) -> np.ndarray:
    dim = graph.message_dim(var)
    total = np.zeros((dim, dim), dtype=np.complex128)
    for nbr in neighbors(graph, var):
        if nbr == exclude:
            continue
        total = total + store.form(nbr, var)
    return total


def var_to_fn_message(
    graph: FactorGraph, store: MessageStore, var: Node, fn: Node
) -> PsdMessage:
    """Sum of incoming forms at `var` from every neighbor except `fn`.

    Exactly linear in the incoming messages; consumes no randomness.
    """
    if not is_variable(var) or is_variable(fn):
        raise ValueError(f"expected variable -> function, got {var} -> {fn}")
    if fn not in neighbors(graph, var):
        raise ValueError(f"no edge between {var} and {fn} in the graph")
    return PsdMessage(source=var, target=fn, Q=_incoming_sum(graph, store, var, exclude=fn))


def fn_to_own_var_message(
    graph: FactorGraph, store: MessageStore, fn: Node, rng: np.random.Generator
) -> PsdMessage:
    """Interference covariance sent from a function node to its own user's variable.

    For f_i -> U_i: every interfering precoder message is collapsed to its
    weakest subspace V_j0 = nu_min(Q_{V_j -> f_i}) and the covariance
    sum_j H_ij V_j0 V_j0^H H_ij^H is sent. The g_j -> V_j rule is the mirror
    image through the channel's conjugate transpose.
    """
    kind, idx = fn
    if kind not in ("f", "g"):
        raise ValueError(f"expected a function node, got {fn}")
    ch = graph.channels
    d = ch.d
    own = ("U", idx) if kind == "f" else ("V", idx)
    dim = graph.message_dim(own)
    total = np.zeros((dim, dim), dtype=np.complex128)
    for nbr in neighbors(graph, fn):
        if nbr == own:
            continue
        basis = nu_min(store.form(nbr, fn), d, rng)
        if kind == "f":
            W = ch.H[idx, nbr[1]] @ basis
        else:
            W = ch.H[nbr[1], idx].conj().T @ basis
        total = total + W @ W.conj().T
    return PsdMessage(source=fn, target=own, Q=total)


def _alternating_inner(
    hub_Q: np.ndarray,
    partner_Qs: list[np.ndarray],
    partner_maps: list[np.ndarray],
    d: int,
    cfg: InnerLoopConfig,
    warm_start: np.ndarray | None,
    rng: np.random.Generator,
    monitor: MessageMonitor | None,
) -> np.ndarray:
    """Blockwise-exact alternating minimization of chi; returns the hub optimum."""
    if not partner_Qs:
        # No third parties: chi reduces to the hub form and one step is exact.
        return nu_min(hub_Q, d, rng)
    n_hub = hub_Q.shape[0]
    if warm_start is not None:
        if warm_start.shape != (n_hub, d):
            raise ValueError(f"warm start must be {n_hub} x {d}, got {warm_start.shape}")
        hub = warm_start
    else:
        hub = random_truncated_unitary(n_hub, d, rng)
    prev = None
    for _ in range(cfg.max_inner_iters):
        partners = []
        for Qk, Gk in zip(partner_Qs, partner_maps):
            Wk = Gk @ hub
            partners.append(nu_min(Qk + 0.5 * (Wk @ Wk.conj().T), d, rng))
        accum = hub_Q.astype(np.complex128, copy=True)
        for pk, Gk in zip(partners, partner_maps):
            Bk = Gk.conj().T @ pk
            accum += 0.5 * (Bk @ Bk.conj().T)
        hub = nu_min(accum, d, rng)
        objective = float(np.trace(hub.conj().T @ accum @ hub).real)
        objective += sum(
            float(np.trace(pk.conj().T @ Qk @ pk).real)
            for pk, Qk in zip(partners, partner_Qs)
        )
        if prev is not None:
            if monitor is not None:
                monitor.observe_inner(objective - prev)
            if prev - objective < cfg.inner_tol:
                break
        prev = objective
    return hub


def fn_to_other_var_message(
    graph: FactorGraph,
    store: MessageStore,
    fn: Node,
    target: Node,
    cfg: InnerLoopConfig,
    rng: np.random.Generator,
    warm_start: np.ndarray | None = None,
) -> PsdMessage:
    """Cross message from a function node to another user's variable.

    The sender minimizes its local leakage over everything except the target
    (own-user matrix plus all third-party matrices, via the half-weighted
    alternation) and then reports the covariance the optimized own-user matrix
    induces on the target's link. warm_start, when given, seeds the alternation
    with the hub variable's current belief.
    """
    kind, idx = fn
    if kind not in ("f", "g"):
        raise ValueError(f"expected a function node, got {fn}")
    if target not in neighbors(graph, fn):
        raise ValueError(f"no edge between {fn} and {target} in the graph")
    own = ("U", idx) if kind == "f" else ("V", idx)
    if target == own:
        raise ValueError(f"{fn} -> {target} is the own-variable update, not a cross update")
    ch = graph.channels
    hub_Q = store.form(own, fn)
    partner_Qs: list[np.ndarray] = []
    partner_maps: list[np.ndarray] = []
    for nbr in neighbors(graph, fn):
        if nbr in (own, target):
            continue
        partner_Qs.append(store.form(nbr, fn))
        if kind == "f":
            # Partner V_k couples to the hub U_i through H_ik^H.
            partner_maps.append(ch.H[idx, nbr[1]].conj().T)
        else:
            # Partner U_k couples to the hub V_j through H_kj.
            partner_maps.append(ch.H[nbr[1], idx])
    hub_star = _alternating_inner(
        hub_Q, partner_Qs, partner_maps, ch.d, cfg, warm_start, rng, store.monitor
    )
    if kind == "f":
        W = ch.H[idx, target[1]].conj().T @ hub_star
    else:
        W = ch.H[target[1], idx] @ hub_star
    return PsdMessage(source=fn, target=target, Q=W @ W.conj().T)


def extract_belief(
    graph: FactorGraph, store: MessageStore, var: Node, rng: np.random.Generator
) -> np.ndarray:
    """Current estimate at a variable node: nu_min of the sum of ALL incoming forms."""
    if not is_variable(var):
        raise ValueError(f"beliefs are defined at variable nodes, got {var}")
    total = _incoming_sum(graph, store, var, exclude=None)
    return nu_min(total, graph.channels.d, rng)
