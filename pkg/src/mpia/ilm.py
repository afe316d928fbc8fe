"""Classic iterative leakage minimization, as an independent reference.

Alternates the two closed-form half-steps: each receive filter picks the
weakest d-dimensional subspace of its incoming interference covariance, then
each precoder does the same against the covariance its transmissions induce at
the other receivers. Every half-step is an exact block minimization of the
total leakage, so the recorded leakage sequence never increases.

This implementation deliberately shares nothing with the message-passing
engine except the linear-algebra kernel; the schedule runner with the
four-family schedule and zero initialization must reproduce it iterate by
iterate, which the test suite checks against this module as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet
from .linalg import nu_min, random_truncated_unitary
from .metrics import leakage


@dataclass
class IlmState:
    """Final matrices plus the full per-iteration trajectory."""

    filters: list[np.ndarray]        # U_i, N x d
    precoders: list[np.ndarray]      # V_j, M x d
    leakage_history: list[float]
    # Per-iteration snapshots (filters, precoders) taken at the same phase at
    # which leakage is recorded: right after the filter half-step.
    trajectory: list[tuple[list[np.ndarray], list[np.ndarray]]]


def _receive_covariance(ch: ChannelSet, V: list[np.ndarray], i: int) -> np.ndarray:
    C = np.zeros((ch.N, ch.N), dtype=np.complex128)
    for j in range(ch.K):
        if j == i or not ch.mask[i, j]:
            continue
        W = ch.H[i, j] @ V[j]
        C = C + W @ W.conj().T
    return C


def _transmit_covariance(ch: ChannelSet, U: list[np.ndarray], j: int) -> np.ndarray:
    C = np.zeros((ch.M, ch.M), dtype=np.complex128)
    for i in range(ch.K):
        if i == j or not ch.mask[i, j]:
            continue
        W = ch.H[i, j].conj().T @ U[i]
        C = C + W @ W.conj().T
    return C


def reference_ilm(
    channels: ChannelSet,
    iterations: int,
    rng: np.random.Generator,
    init: str = "matched",
    leakage_tol: float = 0.0,
) -> IlmState:
    """Run leakage minimization for a fixed iteration count.

    One iteration is: precoder half-step (random initialization on the first
    iteration, covariance minimization afterwards), then filter half-step,
    then record leakage. Recording after the filter half-step pairs each new
    filter set with the precoders it was computed against, which is also the
    phase at which the schedule runner extracts beliefs.

    init="matched" draws the initial precoders as the weakest subspace of a
    covariance built from one Haar-random filter per interfering link
    (destination-major order), which consumes the random stream exactly like
    the message engine's first iteration under zero initialization. That makes
    the two implementations comparable draw for draw on a shared seed.
    init="haar" draws each initial precoder directly instead.

    A positive leakage_tol stops the loop early once the recorded leakage
    reaches it; the default 0.0 keeps the full fixed budget.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    if init not in ("matched", "haar"):
        raise ValueError(f"init must be 'matched' or 'haar', got {init!r}")
    if leakage_tol < 0:
        raise ValueError("leakage_tol must be non-negative")
    ch = channels
    K, d = ch.K, ch.d
    U: list[np.ndarray] = [None] * K  # type: ignore[list-item]
    V: list[np.ndarray] = [None] * K  # type: ignore[list-item]
    history: list[float] = []
    trajectory: list[tuple[list[np.ndarray], list[np.ndarray]]] = []
    for t in range(iterations):
        if t == 0:
            for j in range(K):
                if init == "haar":
                    V[j] = random_truncated_unitary(ch.M, d, rng)
                    continue
                C = np.zeros((ch.M, ch.M), dtype=np.complex128)
                for i in range(K):
                    if i == j or not ch.mask[i, j]:
                        continue
                    probe = random_truncated_unitary(ch.N, d, rng)
                    W = ch.H[i, j].conj().T @ probe
                    C = C + W @ W.conj().T
                V[j] = nu_min(C, d, rng)
        else:
            for j in range(K):
                V[j] = nu_min(_transmit_covariance(ch, U, j), d, rng)
        for i in range(K):
            U[i] = nu_min(_receive_covariance(ch, V, i), d, rng)
        history.append(leakage(ch, U, V).total)
        trajectory.append(([u.copy() for u in U], [v.copy() for v in V]))
        if history[-1] <= leakage_tol:
            break
    return IlmState(filters=U, precoders=V, leakage_history=history, trajectory=trajectory)
