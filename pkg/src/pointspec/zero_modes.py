"""Zero-energy obstructions: eigenvalue multiplicity e and resonance multiplicity r.

With K0 = Ker Gamma_0 and Gamma_1 proportional to the all-ones matrix,
``e = dim(K0 ∩ Ker Gamma_1)`` counts sum-zero coefficient vectors (L^2 zero
modes) and ``r = dim K0 - e`` counts the remaining ones (resonances).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from pointspec.config import Configuration
from pointspec.errors import CoincidentWithCenter, NotAZeroMode
from pointspec.gamma import (
    DEFAULT_TOL,
    FOUR_PI,
    gamma_coefficient,
    gamma_imag_matrix,
    intersect_kernels,
    nullspace,
    realify,
)

BORDERLINE_FACTOR = 100.0
VERIFY_LAMBDAS = (0.1, 0.01)
VERIFY_TOL = 1e-10
MEMBERSHIP_TOL = 1e-8


class ZeroKind(str, enum.Enum):
    REGULAR = "Regular"
    RESONANCE_ONLY = "ResonanceOnly"
    EIGENVALUE_ONLY = "EigenvalueOnly"
    MIXED = "Mixed"

    @classmethod
    def from_counts(cls, e: int, r: int) -> "ZeroKind":
        if e == 0 and r == 0:
            return cls.REGULAR
        if e == 0:
            return cls.RESONANCE_ONLY
        if r == 0:
            return cls.EIGENVALUE_ONLY
        return cls.MIXED


@dataclass(frozen=True)
class ZeroModeReport:
    e: int
    r: int
    eigen_basis: np.ndarray  # (N, e)
    resonance_basis: np.ndarray  # (N, r)
    kind: ZeroKind
    gamma0_singular_values: np.ndarray
    borderline: bool
    tol: float

    @property
    def kernel_dim(self) -> int:
        return self.e + self.r


def _complement(inner: np.ndarray, outer: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(outer) ⊖ span(inner)."""
    if outer.shape[1] == 0:
        return outer
    resid = outer - inner @ (inner.conj().T @ outer) if inner.shape[1] else outer
    u, s, _ = np.linalg.svd(resid, full_matrices=False)
    k = outer.shape[1] - inner.shape[1]
    return u[:, :k]


def classify_zero_energy(config: Configuration, tol: float = DEFAULT_TOL) -> ZeroModeReport:
    g0 = gamma_coefficient(config, 0)
    g1 = gamma_coefficient(config, 1)
    k0 = nullspace(g0, tol)
    inter = intersect_kernels(k0, g1, tol)
    eigen = realify(inter.basis)
    resonance = realify(_complement(eigen, k0.basis))
    e, r = eigen.shape[1], resonance.shape[1]

    s = k0.singular_values
    s_max = s.max() if s.size else 0.0
    thr = tol * s_max
    borderline = bool(np.any((s > thr / BORDERLINE_FACTOR) & (s <= thr * BORDERLINE_FACTOR)))
    return ZeroModeReport(
        e=e,
        r=r,
        eigen_basis=eigen,
        resonance_basis=resonance,
        kind=ZeroKind.from_counts(e, r),
        gamma0_singular_values=s,
        borderline=borderline,
        tol=tol,
    )


def zero_mode_value(config: Configuration, c, x) -> complex:
    """psi(x) = sum_j c_j / (4 pi |x - y_j|)."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(config.centers - x[None, :], axis=1)
    if np.any(r == 0.0):
        raise CoincidentWithCenter("evaluation point coincides with a center")
    return complex(np.sum(np.asarray(c) / (FOUR_PI * r)))


def zero_mode_norm(config: Configuration, c) -> float:
    """L^2 norm of sum_j c_j G_0^{y_j} for a sum-zero c.

    The small-lam limit of the Yukawa Gram matrix leaves
    ``-(8 pi)^-1 sum_jk |y_j - y_k| c_j conj(c_k)``, which is non-negative on
    sum-zero vectors.
    """
    c = np.asarray(c)
    if abs(c.sum()) > MEMBERSHIP_TOL * max(1.0, np.abs(c).sum()):
        raise NotAZeroMode("only sum-zero coefficient vectors give L^2 functions")
    val = -np.real(c.conj() @ config.distances() @ c) / (8.0 * math.pi)
    return float(math.sqrt(max(0.0, val)))


def regular_part_at(config: Configuration, c, lam: float, x) -> complex:
    """F(x) = sum_j c_j (G_0^{y_j}(x) - G_{i lam}^{y_j}(x)), continuous at the centers.

    Each term is (1 - exp(-lam r)) / (4 pi r), which tends to lam / (4 pi) as r -> 0.
    """
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(config.centers - x[None, :], axis=1)
    safe = np.where(r > 0, r, 1.0)
    terms = np.where(r > 0, -np.expm1(-lam * safe) / (FOUR_PI * safe), lam / FOUR_PI)
    return complex(np.sum(np.asarray(c) * terms))


@dataclass(frozen=True)
class ZeroModeVerification:
    lambdas: tuple[float, ...]
    residuals: tuple[float, ...]
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def verify_zero_eigenfunction(
    config: Configuration, c, lambdas=VERIFY_LAMBDAS, tol: float = VERIFY_TOL
) -> ZeroModeVerification:
    """Check the boundary condition F(y_k) = (Gamma(i lam) c)_k for a zero eigenvector c.

    Raises
    ------
    NotAZeroMode
        if ``c`` is not (numerically) in Ker Gamma_0 ∩ Ker Gamma_1.
    """
    c = np.asarray(c)
    g0 = gamma_coefficient(config, 0)
    cn = np.linalg.norm(c)
    if cn == 0:
        raise NotAZeroMode("zero vector")
    scale = max(np.linalg.norm(g0, 2), 1.0 / FOUR_PI)
    if np.linalg.norm(g0 @ c) > MEMBERSHIP_TOL * scale * cn:
        raise NotAZeroMode("coefficient vector is not in Ker Gamma_0")
    if abs(c.sum()) > MEMBERSHIP_TOL * math.sqrt(c.size) * cn:
        raise NotAZeroMode("coefficient vector is not in Ker Gamma_1 (sum is non-zero)")
    residuals = []
    for lam in lambdas:
        f = np.array([regular_part_at(config, c, lam, y) for y in config.centers])
        gc = gamma_imag_matrix(config, lam) @ c
        residuals.append(float(np.max(np.abs(f - gc))))
    return ZeroModeVerification(tuple(float(l) for l in lambdas), tuple(residuals), tol)
