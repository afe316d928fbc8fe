"""Channel model for the K-user MIMO interference channel.

K transmitter/receiver pairs; H[i][j] is the N x M channel from transmitter j
into receiver i. Receivers use N antennas, transmitters M, and every user sends
d streams. The connectivity mask is explicit: mask[i, j] False means the link
carries no interference and H[i][j] is pinned to the zero matrix. Connectivity
is never inferred from the numerical content of H.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import random_gaussian_matrix


@dataclass(frozen=True)
class ChannelSet:
    """One realization of the interference channel.

    H is a (K, K, N, M) complex array, mask a (K, K) boolean array. User
    indices are 0-based throughout the API.
    """

    K: int
    N: int
    M: int
    d: int
    H: np.ndarray
    mask: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.K < 2:
            raise ValueError(f"need at least 2 users, got K={self.K}")
        if min(self.N, self.M) < 1:
            raise ValueError(f"antenna counts must be positive, got N={self.N}, M={self.M}")
        if not 1 <= self.d <= min(self.N, self.M):
            raise ValueError(f"need 1 <= d <= min(N, M) = {min(self.N, self.M)}, got d={self.d}")
        H = np.asarray(self.H, dtype=np.complex128)
        if H.shape != (self.K, self.K, self.N, self.M):
            raise ValueError(f"H must have shape {(self.K, self.K, self.N, self.M)}, got {H.shape}")
        if not np.isfinite(H.view(np.float64)).all():
            raise ValueError("channel matrices contain non-finite entries")
        mask = self.mask
        if mask is None:
            mask = np.ones((self.K, self.K), dtype=bool)
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (self.K, self.K):
            raise ValueError(f"mask must have shape {(self.K, self.K)}, got {mask.shape}")
        for i in range(self.K):
            for j in range(self.K):
                if not mask[i, j] and np.any(H[i, j]):
                    raise ValueError(f"mask[{i}, {j}] is False but H[{i}][{j}] is nonzero")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "mask", mask)

    def interferers_of(self, i: int) -> list[int]:
        """Transmitters j != i whose signal reaches receiver i."""
        return [j for j in range(self.K) if j != i and self.mask[i, j]]

    def victims_of(self, j: int) -> list[int]:
        """Receivers i != j that transmitter j interferes with."""
        return [i for i in range(self.K) if i != j and self.mask[i, j]]


def random_channel_set(
    K: int,
    N: int,
    M: int,
    d: int,
    rng: np.random.Generator,
    mask: np.ndarray | None = None,
) -> ChannelSet:
    """Draw all K^2 channel matrices i.i.d. CN(0, 1) per entry, then apply mask.

    The draw order is row-major in (i, j) regardless of the mask, so a given
    seed produces the same surviving links whatever the topology.
    """
    H = np.zeros((K, K, N, M), dtype=np.complex128)
    for i in range(K):
        for j in range(K):
            H[i, j] = random_gaussian_matrix(N, M, rng)
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        for i in range(K):
            for j in range(K):
                if not mask[i, j]:
                    H[i, j] = 0.0
    return ChannelSet(K=K, N=N, M=M, d=d, H=H, mask=mask)
