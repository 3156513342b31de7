"""Numerical witnesses for the negativity of the Gamma_2 form on sum-zero vectors.

The form (8 pi)^-1 sum_jk |y_j - y_k| v_j v_k is averaged over directions w of
the unit sphere: |y| is a constant multiple of the average of |<w, y>|, and in
one dimension the distance form of a sum-zero vector is minus twice a sum of
squared partial sums weighted by the gaps between sorted points.
"""
from __future__ import annotations

import math

import numpy as np

from pointspec.errors import SumNotZero
from pointspec.kernels import distance_form, gap_form, pair_distances

SUM_ZERO_RTOL = 1e-12


def gamma2_form(centers, v) -> float:
    """(8 pi)^-1 sum_{j,k} |y_j - y_k| v_j v_k for real v."""
    d = pair_distances(np.asarray(centers, dtype=float))
    return distance_form(d, np.asarray(v, dtype=float)) / (8.0 * math.pi)


def direct_projected_form(yt, v) -> float:
    """sum_{j,k} |yt_j - yt_k| v_j v_k by the plain double sum."""
    yt = np.asarray(yt, dtype=float)
    v = np.asarray(v, dtype=float)
    return float(v @ np.abs(yt[:, None] - yt[None, :]) @ v)


def projected_form_oracle(yt, v) -> float:
    """One-dimensional distance form of a sum-zero v via sorted gaps.

    Ties need no special care: a zero gap contributes nothing.

    Raises
    ------
    SumNotZero
        if ``sum(v)`` is not zero relative to ``sum(|v|)``.
    """
    v = np.asarray(v, dtype=float)
    if abs(v.sum()) > SUM_ZERO_RTOL * max(1.0, float(np.abs(v).sum())):
        raise SumNotZero(f"sum(v) = {v.sum():.3g}, expected 0")
    return gap_form(np.asarray(yt, dtype=float), v)


def sphere_rule(order: int, axis=None) -> tuple[np.ndarray, np.ndarray]:
    """Product rule on S^2: Gauss-Legendre in cos(theta) times uniform azimuth.

    The polar axis is ``axis`` (default e_z). Each hemisphere gets its own
    Gauss-Legendre rule of ``order`` nodes, so integrands with a kink on the
    equator of ``axis`` are integrated to machine precision. Returns
    ``(directions, weights)`` with weights summing to 4 pi.
    """
    if order < 1:
        raise ValueError("order must be positive")
    t, wt = np.polynomial.legendre.leggauss(order)
    # map [-1, 1] onto [-1, 0] and [0, 1]
    cos_t = np.concatenate([0.5 * (t - 1.0), 0.5 * (t + 1.0)])
    w_t = np.concatenate([0.5 * wt, 0.5 * wt])
    n_phi = 2 * order
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    sin_t = np.sqrt(1.0 - cos_t**2)
    dirs = np.stack(
        [
            (sin_t[:, None] * np.cos(phi)[None, :]).ravel(),
            (sin_t[:, None] * np.sin(phi)[None, :]).ravel(),
            np.repeat(cos_t, n_phi),
        ],
        axis=1,
    )
    weights = np.repeat(w_t, n_phi) * (2.0 * np.pi / n_phi)
    if axis is not None:
        dirs = dirs @ _frame(np.asarray(axis, dtype=float)).T
    return dirs, weights


def _frame(axis: np.ndarray) -> np.ndarray:
    """Rotation matrix whose third column is axis/|axis|."""
    u = axis / np.linalg.norm(axis)
    ref = np.array([1.0, 0.0, 0.0]) if abs(u[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(u, ref)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    return np.stack([e1, e2, u], axis=1)


def sphere_average(y, order: int = 32) -> float:
    """Quadrature of ∫_{S^2} |<w, y>| dw in a frame aligned with y."""
    y = np.asarray(y, dtype=float)
    dirs, w = sphere_rule(order, axis=y)
    return float(np.sum(w * np.abs(dirs @ y)))


def sphere_average_constant(order: int = 32, direction=(0.0, 0.0, 1.0)) -> float:
    """The constant c with ∫_{S^2} |<w, y>| dw = c |y| (exactly 2 pi)."""
    if order < 8:
        raise ValueError("order must be at least 8")
    y = np.asarray(direction, dtype=float)
    return sphere_average(y, order) / float(np.linalg.norm(y))


def averaged_projected_form(centers, v, order: int = 64) -> float:
    """(8 pi c)^-1 ∫_{S^2} sum_jk |<w, y_j - y_k>| v_j v_k dw by a fixed-frame product rule.

    The integrand has kinks on several great circles, so unlike
    :func:`sphere_average_constant` this is only algebraically accurate in ``order``.
    """
    centers = np.asarray(centers, dtype=float)
    v = np.asarray(v, dtype=float)
    dirs, w = sphere_rule(order)
    c = sphere_average_constant(max(order, 8))
    proj = centers @ dirs.T  # (N, M)
    total = sum(wk * projected_form_oracle(proj[:, m], v) for m, wk in enumerate(w))
    return float(total / (8.0 * math.pi * c))
