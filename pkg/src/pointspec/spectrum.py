"""Negative eigenvalues as zeros of Gamma(i*lam) on the positive imaginary axis.

On that axis Gamma is real symmetric and d/dlam Gamma(i lam) = M(lam) / 4pi with
M_jk = exp(-lam |y_j - y_k|), a positive definite matrix. The ordered
eigenvalues of Gamma(i lam) are therefore increasing in lam, and each one that
starts negative at lam = 0 crosses zero exactly once.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from pointspec.config import Configuration
from pointspec.errors import BranchNotBracketed, CoincidentWithCenter
from pointspec.gamma import DEFAULT_TOL, FOUR_PI
from pointspec.kernels import gamma_imag

MERGE_GAP = 1e-8
BISECT_WIDTH = 1e-12
SCAN_POINTS = 128


class BranchMonotonicityWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class BoundState:
    lam: float
    multiplicity: int
    coefficient_basis: np.ndarray  # (N, multiplicity), orthonormal columns

    @property
    def energy(self) -> float:
        return -self.lam * self.lam


@dataclass(frozen=True)
class EigenfunctionRep:
    """psi(x) = sum_j c_j exp(-lam |x - y_j|) / (4 pi |x - y_j|)."""

    lam: float
    coefficients: np.ndarray
    centers: np.ndarray


@dataclass
class SpectrumResult:
    states: list[BoundState]
    lambda_max: float
    diagnostics: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]


def default_lambda_max(config: Configuration) -> float:
    """Gershgorin-type bound beyond which Gamma(i lam) is positive definite."""
    n = config.n
    g_max = 0.0
    if n > 1:
        d = config.distances()
        g_max = float(1.0 / (FOUR_PI * d[~np.eye(n, dtype=bool)].min()))
    return FOUR_PI * (float(np.max(np.abs(config.alphas))) + 1.0) + n * g_max * FOUR_PI


def _branches(dist, alphas, lams) -> np.ndarray:
    return np.linalg.eigvalsh(gamma_imag(dist, alphas, lams))


def _branch_value(dist, alphas, lam: float, k: int) -> float:
    return float(np.linalg.eigvalsh(gamma_imag(dist, alphas, np.array([lam]))[0])[k])


def _branch_slope(dist, alphas, lam: float, k: int) -> tuple[float, float]:
    """Eigenvalue k of Gamma(i lam) and its lam-derivative (Hellmann-Feynman)."""
    g = gamma_imag(dist, alphas, np.array([lam]))[0]
    w, v = np.linalg.eigh(g)
    vec = v[:, k]
    m = np.exp(-lam * dist)
    return float(w[k]), float(vec @ m @ vec) / FOUR_PI


def _refine(dist, alphas, k: int, lo: float, hi: float) -> float:
    f_lo = _branch_value(dist, alphas, lo, k)
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = _branch_value(dist, alphas, mid, k)
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    val, slope = _branch_slope(dist, alphas, lam, k)
    if slope > 0:
        step = lam - val / slope
        # keep the Newton step only if it stays inside the last bracket
        if lo - BISECT_WIDTH <= step <= hi + BISECT_WIDTH:
            lam = step
    return lam


def find_negative_eigenvalues(
    config: Configuration, lambda_max: float | None = None, tol: float = DEFAULT_TOL
) -> SpectrumResult:
    """Every lam in (0, lambda_max] with Gamma(i lam) singular, i.e. energy -lam^2.

    Raises
    ------
    BranchNotBracketed
        if some eigenvalue branch is still negative at ``lambda_max``.
    """
    if lambda_max is None:
        lambda_max = default_lambda_max(config)
    if lambda_max <= 0:
        raise ValueError("lambda_max must be positive")
    dist = config.distances()
    alphas = config.alphas
    diagnostics: list[str] = []

    grid = np.linspace(0.0, lambda_max, SCAN_POINTS)
    vals = _branches(dist, alphas, grid)
    scale = max(1.0, float(np.abs(vals).max()))
    drops = np.diff(vals, axis=0) < -1e-12 * scale
    if drops.any():
        msg = "eigenvalue branches of Gamma(i lam) decrease on the scan grid"
        diagnostics.append(msg)
        warnings.warn(msg, BranchMonotonicityWarning, stacklevel=2)

    # a branch that is numerically zero at lam = 0 is a zero-energy mode, not a bound state
    thr = tol * max(1.0, float(np.abs(vals[0]).max()))
    start_negative = np.flatnonzero(vals[0] < -thr)
    still_negative = np.flatnonzero(vals[-1] <= 0)
    if still_negative.size:
        raise BranchNotBracketed(
            f"{still_negative.size} branch(es) still non-positive at lambda_max={lambda_max:g}"
        )

    roots = []
    for k in start_negative:
        # tighten the bracket using the scan before bisecting
        crossing = int(np.argmax(vals[:, k] > 0))
        lo, hi = grid[crossing - 1], grid[crossing]
        roots.append((_refine(dist, alphas, int(k), float(lo), float(hi)), int(k)))
    roots.sort()

    clusters: list[list[tuple[float, int]]] = []
    for root in roots:
        if clusters and root[0] - clusters[-1][-1][0] < MERGE_GAP:
            clusters[-1].append(root)
        else:
            clusters.append([root])

    states = []
    for cluster in clusters:
        lam = float(np.mean([r for r, _ in cluster]))
        mult = len(cluster)
        g = gamma_imag(dist, alphas, np.array([lam]))[0]
        w, v = np.linalg.eigh(g)
        s = np.abs(w)
        count = int(np.sum(s <= tol * s.max()))
        if count != mult:
            diagnostics.append(
                f"lam={lam:.12g}: {mult} merged branch(es) but {count} singular value(s) below tol"
            )
        nearest = np.argsort(s)[:mult]
        basis = v[:, np.sort(nearest)]
        states.append(BoundState(lam, mult, basis))
    return SpectrumResult(states, float(lambda_max), diagnostics)


def evaluate_bound_state(rep: EigenfunctionRep, x) -> complex:
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(np.asarray(rep.centers, dtype=float) - x[None, :], axis=1)
    if np.any(r == 0.0):
        raise CoincidentWithCenter("evaluation point coincides with a center")
    c = np.asarray(rep.coefficients)
    return complex(np.sum(c * np.exp(-rep.lam * r) / (FOUR_PI * r)))


def gram_inner(lam: float, a, b) -> float:
    """<G_{i lam}^a, G_{i lam}^b> in L^2(R^3), equal to exp(-lam |a-b|) / (8 pi lam)."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    d = float(np.linalg.norm(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))
    return math.exp(-lam * d) / (8.0 * math.pi * lam)


def gram_matrix(lam: float, centers) -> np.ndarray:
    centers = np.asarray(centers, dtype=float)
    d = np.linalg.norm(centers[:, None, :] - centers[None, :, :], axis=-1)
    return np.exp(-lam * d) / (8.0 * math.pi * lam)


def l2_norm(rep: EigenfunctionRep) -> float:
    c = np.asarray(rep.coefficients)
    g = gram_matrix(rep.lam, rep.centers)
    return float(math.sqrt(max(0.0, float(np.real(c.conj() @ g @ c)))))


def normalized(rep: EigenfunctionRep) -> EigenfunctionRep:
    """Same eigenfunction scaled to unit L^2 norm."""
    nrm = l2_norm(rep)
    return EigenfunctionRep(rep.lam, np.asarray(rep.coefficients) / nrm, rep.centers)


def eigenfunctions(config: Configuration, state: BoundState) -> list[EigenfunctionRep]:
    return [
        normalized(EigenfunctionRep(state.lam, state.coefficient_basis[:, i], config.centers))
        for i in range(state.multiplicity)
    ]
