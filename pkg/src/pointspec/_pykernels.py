"""Pure numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` function for function and are used whenever the
compiled module is unavailable (or ``POINTSPEC_PURE=1`` is set).
"""
from __future__ import annotations

import numpy as np

FOUR_PI = 4.0 * np.pi


def pair_distances(centers: np.ndarray) -> np.ndarray:
    centers = np.asarray(centers, dtype=np.float64)
    diff = centers[:, None, :] - centers[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def gamma_batch(dist: np.ndarray, alphas: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Stack of Gamma(z) matrices, shape (M, N, N), one per entry of ``zs``."""
    dist = np.asarray(dist, dtype=np.float64)
    alphas = np.asarray(alphas, dtype=np.float64)
    zs = np.asarray(zs, dtype=np.complex128).reshape(-1)
    n = dist.shape[0]
    off = ~np.eye(n, dtype=bool)
    safe = np.where(off, dist, 1.0)
    out = -np.exp(1j * zs[:, None, None] * safe[None]) / (FOUR_PI * safe[None])
    out[:, ~off] = alphas[None, :] - 1j * zs[:, None] / FOUR_PI
    return out


def gamma_imag(dist: np.ndarray, alphas: np.ndarray, lams: np.ndarray) -> np.ndarray:
    """Real symmetric Gamma(i*lam) for each lam, shape (M, N, N)."""
    dist = np.asarray(dist, dtype=np.float64)
    alphas = np.asarray(alphas, dtype=np.float64)
    lams = np.asarray(lams, dtype=np.float64).reshape(-1)
    n = dist.shape[0]
    off = ~np.eye(n, dtype=bool)
    safe = np.where(off, dist, 1.0)
    out = -np.exp(-lams[:, None, None] * safe[None]) / (FOUR_PI * safe[None])
    out[:, ~off] = alphas[None, :] + lams[:, None] / FOUR_PI
    return out


def distance_form(dist: np.ndarray, v: np.ndarray) -> float:
    """sum_{j,k} dist[j,k] v_j v_k for a real vector v."""
    v = np.asarray(v, dtype=np.float64)
    return float(v @ np.asarray(dist, dtype=np.float64) @ v)


def gap_form(yt: np.ndarray, v: np.ndarray) -> float:
    """-2 * sum over sorted gaps of gap * (sum of v above the gap)**2."""
    yt = np.asarray(yt, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    order = np.argsort(yt, kind="stable")
    ys = yt[order]
    above = np.cumsum(v[order][::-1])[::-1]
    gaps = np.diff(ys)
    return float(-2.0 * np.sum(gaps * above[1:] ** 2))
