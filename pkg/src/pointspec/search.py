"""Inverse problems and configuration search for zero modes.

``e`` counts sum-zero vectors in Ker Gamma_0. For a geometry Y and a target
dimension m, the search measures how far Y is from admitting m such vectors:
with S an orthonormal basis of the sum-zero hyperplane, it minimises over the
couplings the sum of the m smallest squared singular values of
``(diag(alpha) - G_0) S``. That is the stacked system (Gamma_0; 1^T) restricted
to the vectors the 1^T row already annihilates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from pointspec.config import Configuration, validate
from pointspec.errors import InconsistentZeroComponent
from pointspec.gamma import DEFAULT_TOL, FOUR_PI
from pointspec.kernels import gamma_batch, pair_distances
from pointspec.zero_modes import classify_zero_energy

ZERO_COMPONENT_RTOL = 1e-14
CONSISTENCY_RTOL = 1e-12


@dataclass(frozen=True)
class AlphaSolution:
    alphas: np.ndarray
    free: np.ndarray  # boolean mask of unconstrained couplings (set to 0.0 in ``alphas``)

    def configuration(self, centers, fill: float = 0.0, label: str | None = None) -> Configuration:
        alphas = np.where(self.free, fill, self.alphas)
        return validate(Configuration(centers, alphas, label))


def _g0_offdiag(centers: np.ndarray) -> np.ndarray:
    d = pair_distances(centers)
    n = d.shape[0]
    off = ~np.eye(n, dtype=bool)
    g = np.zeros_like(d)
    g[off] = 1.0 / (FOUR_PI * d[off])
    return g


def solve_alpha_for_kernel(centers, c) -> AlphaSolution:
    """Couplings making Gamma_0 c = 0: alpha_j c_j = sum_{k != j} G_0(y_j, y_k) c_k.

    Raises
    ------
    InconsistentZeroComponent
        if c_j = 0 while sum_k G_0(y_j, y_k) c_k does not vanish.
    """
    centers = np.asarray(centers, dtype=float)
    c = np.asarray(c, dtype=float)
    g0c = _g0_offdiag(centers) @ c
    cmax = float(np.abs(c).max())
    zero = np.abs(c) <= ZERO_COMPONENT_RTOL * cmax
    scale = float(np.abs(_g0_offdiag(centers)).max()) * float(np.abs(c).sum())
    bad = zero & (np.abs(g0c) > CONSISTENCY_RTOL * max(scale, 1e-300))
    if np.any(bad):
        raise InconsistentZeroComponent(
            f"components {np.flatnonzero(bad).tolist()} are zero but Gamma_0 c has a non-zero entry there"
        )
    alphas = np.zeros_like(c)
    alphas[~zero] = g0c[~zero] / c[~zero]
    return AlphaSolution(alphas, zero)


# search


def sum_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis (n, n-1) of {v : sum(v) = 0}."""
    u, _, _ = np.linalg.svd(np.ones((n, 1)) / math.sqrt(n), full_matrices=True)
    return u[:, 1:]


def normalize_geometry(centers: np.ndarray) -> np.ndarray:
    """Centroid at the origin and mean pairwise distance 1."""
    c = centers - centers.mean(axis=0)
    d = pair_distances(c)
    n = d.shape[0]
    mean = d[~np.eye(n, dtype=bool)].mean()
    return c / mean


def fit_alphas(centers: np.ndarray, m: int, basis: np.ndarray, sweeps: int = 4):
    """Best couplings for target dimension m; returns (alphas, W, energy).

    ``W`` spans (in sum-zero coordinates) the m directions being driven to zero.
    """
    g0 = _g0_offdiag(centers)
    n = g0.shape[0]
    proj = basis @ basis.T
    # exact optimum for m = n - 1; a starting point otherwise
    alphas = np.diag(g0 @ proj) / np.diag(proj)
    w = np.eye(n - 1)
    for _ in range(sweeps if m < n - 1 else 1):
        b = (np.diag(alphas) - g0) @ basis
        _, _, vh = np.linalg.svd(b)
        w = vh[n - 1 - m:].T
        v = basis @ w
        gv = g0 @ v
        alphas = np.sum(v * gv, axis=1) / np.maximum(np.sum(v * v, axis=1), 1e-300)
    b = (np.diag(alphas) - g0) @ basis
    s = np.linalg.svd(b, compute_uv=False)
    energy = float(np.sqrt(np.sum(s[n - 1 - m:] ** 2)))
    return alphas, w, energy


def _polish(centers, alphas, w, basis, rounds: int = 4):
    n = centers.shape[0]

    def residual(p):
        y = p[: 3 * n].reshape(n, 3)
        a = p[3 * n:]
        d = pair_distances(y)
        off = ~np.eye(n, dtype=bool)
        g0 = np.zeros_like(d)
        g0[off] = 1.0 / (FOUR_PI * np.maximum(d[off], 1e-12))
        return ((np.diag(a) - g0) @ basis @ w).ravel()

    y, a = centers, alphas
    for _ in range(rounds):
        sol = least_squares(residual, np.concatenate([y.ravel(), a]), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        y = normalize_geometry(sol.x[: 3 * n].reshape(n, 3))
        a, w, energy = fit_alphas(y, w.shape[1], basis)
        if energy < 1e-15:
            break
    return y, a, w


@dataclass
class SearchResult:
    config: Configuration
    e: int
    r: int
    objective: float
    target: int
    history: list = field(default_factory=list)


def _anneal(n, m, budget, rng, basis, history):
    y = normalize_geometry(rng.normal(size=(n, 3)))
    _, _, energy = fit_alphas(y, m, basis)
    best_y, best_e = y.copy(), energy
    t0 = max(energy, 1e-3) * 0.1
    t_end = t0 * 1e-6
    for it in range(budget):
        frac = it / max(budget - 1, 1)
        temp = t0 * (t_end / t0) ** frac
        diam = pair_distances(y).max()
        step = 0.1 * diam * max(math.sqrt(temp / t0), 1e-3)
        cand = y.copy()
        j = rng.integers(n)
        cand[j] += rng.normal(scale=step, size=3)
        if pair_distances(cand)[~np.eye(n, dtype=bool)].min() < 1e-6:
            continue
        cand = normalize_geometry(cand)
        _, _, e_cand = fit_alphas(cand, m, basis)
        if e_cand <= energy or rng.random() < math.exp(-(e_cand - energy) / temp):
            y, energy = cand, e_cand
            if energy < best_e:
                best_y, best_e = y.copy(), energy
        if it % max(budget // 20, 1) == 0:
            history.append((it, float(temp), float(best_e)))
    return best_y, best_e


def maximize_zero_multiplicity(
    n: int, budget: int = 10_000, seed: int = 0, tol: float = DEFAULT_TOL
) -> SearchResult:
    """Simulated annealing over centers for the largest zero-eigenvalue multiplicity.

    Anneals towards a geometry admitting n - 1 sum-zero kernel vectors, then
    polishes with least squares for each target n-1, n-2, ..., 1 and keeps the
    best classified outcome. Deterministic for a given seed.
    """
    if n < 2:
        raise ValueError("need at least two centers")
    rng = np.random.default_rng(seed)
    basis = sum_zero_basis(n)
    history: list = []
    y0, energy0 = _anneal(n, n - 1, budget, rng, basis, history)

    best = None
    for m in range(n - 1, 0, -1):
        alphas, w, _ = fit_alphas(y0, m, basis)
        y, a, w = _polish(y0, alphas, w, basis)
        _, _, energy = fit_alphas(y, m, basis)
        cfg = validate(Configuration(y, a, f"search(n={n}, seed={seed}, target={m})"))
        rep = classify_zero_energy(cfg, tol)
        key = (rep.e, -energy)
        if best is None or key > best[0]:
            best = (key, SearchResult(cfg, rep.e, rep.r, energy, m, history))
        if rep.e >= m:
            break
    return best[1]


# real-axis scan


@dataclass(frozen=True)
class RealAxisScan:
    min_value: float
    location: float
    z: np.ndarray
    values: np.ndarray


def scan_real_axis(config: Configuration, z_min: float = 0.01, z_max: float = 10.0, grid: int = 1000) -> RealAxisScan:
    """Smallest singular value of Gamma(z) on a uniform real grid."""
    if not 0 < z_min < z_max:
        raise ValueError("need 0 < z_min < z_max")
    zs = np.linspace(z_min, z_max, grid)
    mats = gamma_batch(config.distances(), config.alphas, zs.astype(complex))
    smin = np.linalg.svd(mats, compute_uv=False)[:, -1]
    i = int(np.argmin(smin))
    return RealAxisScan(float(smin[i]), float(zs[i]), zs, smin)
