"""Interference leakage metrics and the alignment residual.

The per-link leakage of link (i, j), i != j, is ||U_i^H H_ij V_j||_F^2: the
interference power from transmitter j that survives receiver i's filter.
Receiver totals, transmitter totals and the network total are all marginals of
the same per-link table, which is why the receiver-side and transmitter-side
decompositions always sum to the same number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet


@dataclass(frozen=True)
class LeakageReport:
    """Leakage decomposed per link, per receiver and per transmitter."""

    per_link: np.ndarray      # (K, K) real, zero diagonal
    per_receiver: np.ndarray  # (K,) row sums
    per_transmitter: np.ndarray  # (K,) column sums
    total: float


def leakage(channels: ChannelSet, U: list[np.ndarray], V: list[np.ndarray]) -> LeakageReport:
    """Evaluate the leakage table for filters U (N x d each) and precoders V (M x d each)."""
    K, N, M, d = channels.K, channels.N, channels.M, channels.d
    if len(U) != K or len(V) != K:
        raise ValueError(f"need K={K} filters and precoders, got {len(U)} and {len(V)}")
    for i in range(K):
        if U[i].shape != (N, d):
            raise ValueError(f"U[{i}] must be {N} x {d}, got {U[i].shape}")
        if V[i].shape != (M, d):
            raise ValueError(f"V[{i}] must be {M} x {d}, got {V[i].shape}")
    per_link = np.zeros((K, K))
    for i in range(K):
        for j in range(K):
            if i == j or not channels.mask[i, j]:
                continue
            cross = U[i].conj().T @ channels.H[i, j] @ V[j]
            per_link[i, j] = np.linalg.norm(cross) ** 2
    return LeakageReport(
        per_link=per_link,
        per_receiver=per_link.sum(axis=1),
        per_transmitter=per_link.sum(axis=0),
        total=float(per_link.sum()),
    )


def ia_residual(channels: ChannelSet, U: list[np.ndarray], V: list[np.ndarray]) -> float:
    """Worst-link alignment defect: max over connected i != j of ||U_i^H H_ij V_j||_F.

    Zero exactly when the alignment conditions hold on every connected link.
    """
    report = leakage(channels, U, V)
    return float(np.sqrt(report.per_link.max()))


def check_feasibility(K: int, N: int, M: int, d: int) -> bool:
    """Symmetric-system proper-dimension heuristic: M + N >= d * (K + 1).

    A necessary-style counting condition, not a guarantee either way; callers
    warn on violation rather than refusing to run.
    """
    return M + N >= d * (K + 1)
