"""Free Green function, the matrix Gamma(z) and tolerance-based kernels.

Gamma(z) has entries ``(alpha_j - i z / 4pi) delta_jk - G_z(y_j, y_k)`` with
``G_z(x, y) = exp(i z |x - y|) / (4 pi |x - y|)`` off the diagonal and zero on it.
It is complex symmetric (not Hermitian) and entire in z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pointspec.config import Configuration
from pointspec.errors import CoincidentPoints
from pointspec.kernels import gamma_batch, gamma_imag

FOUR_PI = 4.0 * math.pi
DEFAULT_TOL = 1e-10


def green_free(z: complex, x, y) -> complex:
    """exp(i z r) / (4 pi r) with r = |x - y|."""
    r = float(np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)))
    if r == 0.0:
        raise CoincidentPoints("Green function evaluated at coincident points")
    return complex(np.exp(1j * complex(z) * r) / (FOUR_PI * r))


def gamma_matrix(config: Configuration, z: complex) -> np.ndarray:
    return gamma_batch(config.distances(), config.alphas, np.array([z]))[0]


def gamma_imag_matrix(config: Configuration, lam: float) -> np.ndarray:
    """Gamma(i lam) for real lam, which is a real symmetric matrix."""
    return gamma_imag(config.distances(), config.alphas, np.array([lam], dtype=float))[0]


def gamma_matrices(config: Configuration, zs) -> np.ndarray:
    """Gamma(z) for every z in ``zs``; shape (M, N, N)."""
    return gamma_batch(config.distances(), config.alphas, np.asarray(zs, dtype=complex))


@dataclass(frozen=True)
class GammaTaylor:
    """Coefficients of Gamma(z) = sum_n z^n Gamma_n near z = 0.

    ``gamma3`` is not needed for the leading pole but it fixes the residue
    ``A_-1`` whenever zero is an eigenvalue.
    """

    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    gamma3: np.ndarray

    def partial_sum(self, z: complex, order: int = 2) -> np.ndarray:
        terms = (self.gamma0, self.gamma1, self.gamma2, self.gamma3)[: order + 1]
        return sum(t * z**k for k, t in enumerate(terms))


def gamma_coefficient(config: Configuration, order: int) -> np.ndarray:
    """Taylor coefficient of order ``order`` of Gamma(z) at z = 0.

    Off the diagonal, -G_z contributes -(i d)^n / (n! 4 pi d); the diagonal only
    has the orders 0 and 1.
    """
    d = config.distances()
    n = config.n
    off = ~np.eye(n, dtype=bool)
    out = np.zeros((n, n), dtype=complex)
    if order == 0:
        out[off] = -1.0 / (FOUR_PI * d[off])
        out[~off] = config.alphas
        return out.real.copy()
    out[off] = -((1j) ** order) * d[off] ** (order - 1) / (math.factorial(order) * FOUR_PI)
    if order == 1:
        out[~off] = -1j / FOUR_PI
    if order % 2 == 0:
        return out.real.copy()
    return out


def gamma_taylor(config: Configuration) -> GammaTaylor:
    return GammaTaylor(*(gamma_coefficient(config, k) for k in range(4)))


# kernels


@dataclass(frozen=True)
class Nullspace:
    """Orthonormal basis (columns of ``basis``) of a numerical kernel."""

    tolerance: float
    basis: np.ndarray
    singular_values: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    @property
    def n(self) -> int:
        return int(self.basis.shape[0])

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T


def _svd_kernel(m: np.ndarray, threshold: float) -> tuple[np.ndarray, np.ndarray]:
    """Right singular vectors with singular value <= threshold (plus any the shape forces)."""
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    cols = m.shape[1]
    small = np.ones(cols, dtype=bool)
    small[: s.size] = s <= threshold
    return vh[small].conj().T, s


def nullspace(m, tol: float = DEFAULT_TOL) -> Nullspace:
    """Kernel of ``m`` relative to its largest singular value.

    A zero matrix has a full kernel.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(m)
    if m.size == 0:
        return Nullspace(tol, np.eye(m.shape[1], dtype=m.dtype), np.zeros(0))
    s_max = np.linalg.norm(m, 2)
    basis, s = _svd_kernel(m, tol * s_max)
    return Nullspace(tol, basis, s)


def intersect_kernels(a: Nullspace, b_matrix, tol: float = DEFAULT_TOL) -> Nullspace:
    """Vectors in span(a.basis) that ``b_matrix`` annihilates, relative to ``|b_matrix|``.

    Works with the restriction ``b_matrix @ a.basis`` so the result stays
    orthonormal inside span(a).
    """
    b_matrix = np.asarray(b_matrix)
    dtype = np.result_type(a.basis, b_matrix)
    if a.dim == 0:
        return Nullspace(tol, np.zeros((a.n, 0), dtype=dtype), np.zeros(0))
    restricted = b_matrix @ a.basis
    w, s = _svd_kernel(restricted, tol * np.linalg.norm(b_matrix, 2))
    return Nullspace(tol, a.basis @ w, s)


def realify(basis: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    """Real orthonormal basis of the same span if the span is closed under conjugation.

    Returns ``basis`` unchanged otherwise.
    """
    if basis.shape[1] == 0 or np.isrealobj(basis):
        return basis
    stacked = np.hstack([basis.real, basis.imag])
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    k = basis.shape[1]
    if s.size > k and s[k] > atol:
        return basis
    cand = u[:, :k]
    # same span: projecting the original basis onto cand loses nothing
    resid = basis - cand @ (cand.T @ basis)
    if np.linalg.norm(resid) > atol * max(1, k):
        return basis
    return cand
