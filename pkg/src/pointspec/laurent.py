"""Laurent expansion of Gamma(z)^-1 at z = 0 and the resolvent built from it.

Two independent routes produce ``Gamma(z)^-1 = A_-2 / z^2 + A_-1 / z + O(1)``:

* :func:`laurent_closed_form` reduces Gamma onto Ker Gamma_0 by a Schur
  complement, then once more onto Ker Gamma_0 ∩ Ker Gamma_1, using the Taylor
  coefficients Gamma_0 .. Gamma_3;
* :func:`laurent_contour` integrates Gamma(z)^-1 z^(-k-1) over a small circle
  with the trapezoidal rule.

The resolvent kernel is the free one plus
``sum_jk (Gamma(z)^-1)_jk G_z^{y_j}(x) G_z^{y_k}(x')``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from pointspec.config import Configuration
from pointspec.errors import (
    APlusPSingular,
    BSingular,
    CoincidentPoints,
    CoincidentWithCenter,
    GammaSingular,
    NoConvergence,
    RestrictedBlockSingular,
    SingularOnContour,
)
from pointspec.gamma import (
    DEFAULT_TOL,
    FOUR_PI,
    _svd_kernel,
    gamma_matrix,
    gamma_taylor,
    nullspace,
)
from pointspec.kernels import gamma_batch

COND_LIMIT = 1e12
B_SINGULAR_RTOL = 1e-10
CONTOUR_NODES = 256
CONTOUR_MAX_RADIUS = 0.1
CONTOUR_AGREEMENT = 1e-9
CONTOUR_MAX_HALVINGS = 30
SINGULAR_RTOL = 1e-13
ZERO_ATOL = 1e-9


# Jensen-Nenciu inversion


def _range_basis(p: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the range of an orthogonal projection."""
    w, v = np.linalg.eigh(0.5 * (p + p.conj().T))
    return v[:, w > 0.5]


def jn_invert(a, p) -> np.ndarray:
    """Invert ``a`` through the shifted matrix ``a + p``.

    With S = (A + P)^-1 and B = P - P S P restricted to range(P),
    ``A^-1 = S + S P B^-1 P S``. ``p`` must be an orthogonal projection.

    Raises
    ------
    APlusPSingular
        if A + P is numerically singular (condition number above 1e12).
    BSingular
        if B is singular on range(P), which happens exactly when A is.
    """
    a = np.asarray(a)
    p = np.asarray(p)
    shifted = a + p
    if np.linalg.cond(shifted) > COND_LIMIT:
        raise APlusPSingular("A + P is not invertible")
    s = np.linalg.inv(shifted)
    q = _range_basis(p)
    if q.shape[1] == 0:
        return s
    b = p - p @ s @ p
    b_r = q.conj().T @ b @ q
    sv = np.linalg.svd(b_r, compute_uv=False)
    if sv[-1] <= B_SINGULAR_RTOL * max(1.0, sv[0]):
        raise BSingular("B is singular on range(P); A is not invertible")
    middle = q @ np.linalg.inv(b_r) @ q.conj().T
    return s + s @ middle @ s


# closed form


@dataclass(frozen=True)
class ClosedForm:
    a_minus2: np.ndarray
    a_minus1: np.ndarray
    case: str  # regular | case1 | case2 | mixed
    kernel_dim: int
    eigen_dim: int


def _complement_basis(basis: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(basis) in C^n."""
    if basis.shape[1] == 0:
        return np.eye(n, dtype=basis.dtype)
    u, _, _ = np.linalg.svd(basis, full_matrices=True)
    return u[:, basis.shape[1]:]


def _checked_inv(m: np.ndarray, what: str) -> np.ndarray:
    if m.size == 0:
        return m
    if np.linalg.cond(m) > COND_LIMIT:
        raise RestrictedBlockSingular(f"{what} is singular on its subspace")
    return np.linalg.inv(m)


def laurent_closed_form(config: Configuration, tol: float = DEFAULT_TOL) -> ClosedForm:
    """A_-2 and A_-1 from the Taylor coefficients of Gamma.

    Write C^N = W ⊕ K with K = Ker Gamma_0. The Schur complement of the W block
    is S(z) = z S1 + z^2 S2 + z^3 S3 + ..., with S1 = Gamma_1 on K. A second
    reduction of S(z)/z onto E = Ker S1 (which is Ker Gamma_0 ∩ Ker Gamma_1)
    gives A_-2 = (P Gamma_2 P on E)^-1 and the residue A_-1. When E = {0} this
    is A_-1 = (P Gamma_1 P on K)^-1; when E ≠ {0} the residue also picks up
    Gamma_3, which is why A_-1 is usually non-zero at a zero eigenvalue.
    """
    tay = gamma_taylor(config)
    n = config.n
    g = (tay.gamma0, tay.gamma1, tay.gamma2, tay.gamma3)
    zeros = np.zeros((n, n), dtype=complex)

    k0 = nullspace(tay.gamma0, tol)
    kb = k0.basis.astype(complex)
    if k0.dim == 0:
        return ClosedForm(zeros, zeros.copy(), "regular", 0, 0)
    wb = _complement_basis(kb, n)

    def blk(m, left, right):
        return left.conj().T @ m @ right

    d0inv = _checked_inv(blk(g[0], wb, wb), "Gamma_0 on Ker(Gamma_0)-perp")
    g1_kw, g1_wk = blk(g[1], kb, wb), blk(g[1], wb, kb)
    s1 = blk(g[1], kb, kb)
    s2 = blk(g[2], kb, kb) - g1_kw @ d0inv @ g1_wk
    s3 = blk(g[3], kb, kb) - (
        g1_kw @ d0inv @ blk(g[2], wb, kb)
        + blk(g[2], kb, wb) @ d0inv @ g1_wk
        - g1_kw @ d0inv @ blk(g[1], wb, wb) @ d0inv @ g1_wk
    )

    # E in K-coordinates: vectors of K annihilated by Gamma_1 (relative to |Gamma_1|)
    e_coords, _ = _svd_kernel(g[1] @ kb, tol * np.linalg.norm(g[1], 2))
    k, e = kb.shape[1], e_coords.shape[1]
    if e == 0:
        a_minus1 = kb @ _checked_inv(s1, "P Gamma_1 P") @ kb.conj().T
        return ClosedForm(zeros, a_minus1, "case1", k, 0)

    r_coords = _complement_basis(e_coords, k)
    v0inv = _checked_inv(blk(s2, e_coords, e_coords), "P Gamma_2 P")
    x_minus1 = e_coords @ v0inv @ e_coords.conj().T
    if r_coords.shape[1]:
        tau_inv = _checked_inv(blk(s1, r_coords, r_coords), "Gamma_1 on the resonant part")
        s2_er, s2_re = blk(s2, e_coords, r_coords), blk(s2, r_coords, e_coords)
        v1 = blk(s3, e_coords, e_coords) - s2_er @ tau_inv @ s2_re
        x0 = (
            r_coords @ tau_inv @ r_coords.conj().T
            - r_coords @ tau_inv @ s2_re @ v0inv @ e_coords.conj().T
            - e_coords @ v0inv @ s2_er @ tau_inv @ r_coords.conj().T
            - e_coords @ v0inv @ v1 @ v0inv @ e_coords.conj().T
        )
        case = "mixed"
    else:
        v1 = blk(s3, e_coords, e_coords)
        x0 = -e_coords @ v0inv @ v1 @ v0inv @ e_coords.conj().T
        case = "case2"

    a_minus2 = kb @ x_minus1 @ kb.conj().T
    # the W-K coupling terms vanish in exact arithmetic because Gamma_1 kills E
    cross = wb @ d0inv @ g1_wk @ x_minus1 @ kb.conj().T
    cross2 = kb @ x_minus1 @ g1_kw @ d0inv @ wb.conj().T
    a_minus1 = kb @ x0 @ kb.conj().T - cross - cross2
    return ClosedForm(a_minus2, a_minus1, case, k, e)


# contour extraction


def _contour_nodes(radius: float, nodes: int) -> np.ndarray:
    # half-step offset keeps the nodes off both axes
    return radius * np.exp(2j * np.pi * (np.arange(nodes) + 0.5) / nodes)


def _inverse_on_circle(config: Configuration, radius: float, nodes: int):
    zs = _contour_nodes(radius, nodes)
    mats = gamma_batch(config.distances(), config.alphas, zs)
    sv = np.linalg.svd(mats, compute_uv=False)
    if np.any(sv[:, -1] <= SINGULAR_RTOL * sv[:, 0]):
        raise SingularOnContour(f"Gamma(z) is singular on |z| = {radius:g}")
    return zs, mats, np.linalg.inv(mats)


def winding_number(config: Configuration, radius: float, nodes: int = CONTOUR_NODES) -> int:
    """Zeros of det Gamma(z) inside |z| < radius (argument principle)."""
    zs = _contour_nodes(radius, nodes)
    dets = np.linalg.det(gamma_batch(config.distances(), config.alphas, zs))
    ph = np.angle(dets)
    inc = np.diff(np.concatenate([ph, ph[:1]]))
    inc = (inc + np.pi) % (2 * np.pi) - np.pi
    return int(round(inc.sum() / (2 * np.pi)))


def default_radius(config: Configuration) -> float:
    """Half the distance to the nearest bound-state pole, capped at 0.1."""
    from pointspec.spectrum import find_negative_eigenvalues

    states = find_negative_eigenvalues(config)
    r = CONTOUR_MAX_RADIUS
    if len(states):
        r = min(r, 0.5 * min(s.lam for s in states))
    return r


def _coefficients_at(config, orders, radius, nodes):
    zs, _, inv = _inverse_on_circle(config, radius, nodes)
    return {k: np.mean(inv * (zs ** (-k))[:, None, None], axis=0) for k in orders}


@dataclass(frozen=True)
class ContourResult:
    coefficients: dict
    radius: float
    halvings: int


def contour_coefficients(
    config: Configuration,
    orders: Sequence[int] = (-2, -1, 0),
    radius: float | None = None,
    nodes: int = CONTOUR_NODES,
) -> ContourResult:
    """Laurent coefficients A_k = (2 pi i)^-1 ∮ Gamma(z)^-1 z^(-k-1) dz.

    The radius is halved until the winding number of det Gamma equals the order
    of its zero at the origin, so nearby resonance poles in the lower half plane
    are excluded, and then until two successive radii agree to 1e-9.
    """
    if nodes < 64:
        raise ValueError("at least 64 nodes are required")
    r0 = default_radius(config) if radius is None else float(radius)
    target = expected_winding(config)
    radii = [r0 / 2**i for i in range(CONTOUR_MAX_HALVINGS + 1)]
    windings: list[int] = []
    prev = None
    for i, r in enumerate(radii):
        windings.append(winding_number(config, r, nodes))
        if windings[-1] != target:
            prev = None
            continue
        try:
            cur = _coefficients_at(config, orders, r, nodes)
        except SingularOnContour:
            # radius so small that Gamma(z) is singular to working precision
            break
        if prev is not None:
            scale = max(1.0, max(float(np.abs(c).max()) for c in cur.values()))
            diff = max(float(np.abs(cur[k] - prev[k]).max()) for k in orders)
            if diff <= CONTOUR_AGREEMENT * scale:
                return ContourResult(prev, radii[i - 1], i - 1)
        prev = cur
    raise NoConvergence(
        f"contour coefficients did not settle (windings {windings}, expected {target})"
    )


def expected_winding(config: Configuration, tol: float = DEFAULT_TOL) -> int:
    """Order of the zero of det Gamma at z = 0: one per resonance, two per zero eigenvalue."""
    from pointspec.zero_modes import classify_zero_energy

    rep = classify_zero_energy(config, tol)
    return rep.r + 2 * rep.e


def laurent_contour(
    config: Configuration, k: int, radius: float | None = None, nodes: int = CONTOUR_NODES
) -> np.ndarray:
    if k not in (-2, -1, 0):
        raise ValueError("k must be -2, -1 or 0")
    return contour_coefficients(config, (k,), radius, nodes).coefficients[k]


# combined expansion


@dataclass
class LaurentExpansion:
    a_minus2: np.ndarray
    a_minus1: np.ndarray
    regular_sample: dict
    radius: float
    method: str
    case: str | None = None
    discrepancy: dict = field(default_factory=dict)

    def singular_part(self, z: complex) -> np.ndarray:
        return self.a_minus2 / z**2 + self.a_minus1 / z


def _regular_samples(config, a2, a1, radius, count=4) -> dict:
    zs = 0.5 * radius * np.exp(1j * np.pi * (np.arange(count) + 0.5) / (count / 2))
    out = {}
    for z in zs:
        out[complex(z)] = np.linalg.inv(gamma_matrix(config, z)) - a2 / z**2 - a1 / z
    return out


def laurent_expansion(
    config: Configuration, method: str = "both", tol: float = DEFAULT_TOL
) -> LaurentExpansion:
    """A_-2, A_-1 by ``closed``, ``contour`` or ``both`` (closed form reported, contour as check)."""
    if method not in ("closed", "contour", "both"):
        raise ValueError(f"unknown method {method!r}")
    closed = cont = None
    if method in ("closed", "both"):
        closed = laurent_closed_form(config, tol)
    if method in ("contour", "both"):
        cont = contour_coefficients(config, (-2, -1))
        radius = cont.radius
    else:
        radius = default_radius(config)

    if closed is not None:
        a2, a1, case = closed.a_minus2, closed.a_minus1, closed.case
    else:
        a2, a1, case = cont.coefficients[-2], cont.coefficients[-1], None
    disc = {}
    if closed is not None and cont is not None:
        disc = {
            "a_minus2": float(np.abs(closed.a_minus2 - cont.coefficients[-2]).max()),
            "a_minus1": float(np.abs(closed.a_minus1 - cont.coefficients[-1]).max()),
        }
    name = {"closed": "closed_form", "contour": "contour", "both": "both"}[method]
    return LaurentExpansion(a2, a1, _regular_samples(config, a2, a1, radius), radius, name, case, disc)


def remainder_sup(config: Configuration, expansion: LaurentExpansion, radius: float, nodes: int = 128) -> float:
    """max over |z| = radius of |Gamma(z)^-1 - A_-2/z^2 - A_-1/z| (entrywise)."""
    zs, _, inv = _inverse_on_circle(config, radius, nodes)
    rem = inv - expansion.a_minus2 / zs[:, None, None] ** 2 - expansion.a_minus1 / zs[:, None, None]
    return float(np.abs(rem).max())


# rank-N operators and the resolvent


@dataclass(frozen=True)
class Anchor:
    """Either exp(-lam |x - center|) / (4 pi |x - center|) or the constant ``value``."""

    center: np.ndarray | None
    lam: float = 0.0
    value: complex = 1.0

    @property
    def is_constant(self) -> bool:
        return self.center is None

    def __call__(self, x) -> complex:
        if self.center is None:
            return complex(self.value)
        r = float(np.linalg.norm(np.asarray(x, dtype=float) - self.center))
        if r == 0.0:
            raise CoincidentWithCenter("anchor evaluated at its center")
        return complex(self.value * math.exp(-self.lam * r) / (FOUR_PI * r))


@dataclass(frozen=True)
class RankNOperator:
    """sum_jk M_jk |g_j><conj g_k|, with kernel sum_jk M_jk g_j(x) g_k(x')."""

    coefficient_matrix: np.ndarray
    left_anchors: tuple
    right_anchors: tuple

    def kernel(self, x, xp) -> complex:
        gl = np.array([g(x) for g in self.left_anchors])
        gr = np.array([g(xp) for g in self.right_anchors])
        return complex(gl @ self.coefficient_matrix @ gr)

    def apply(self, f, points, weights):
        """Action on ``f`` with the inner products done by the given quadrature rule."""
        fvals = np.array([f(p) for p in points])
        proj = np.array([np.sum(weights * fvals * np.array([g(p) for p in points])) for g in self.right_anchors])
        coeff = self.coefficient_matrix @ proj

        def result(x):
            return complex(sum(c * g(x) for c, g in zip(coeff, self.left_anchors)))

        return result

    def max_abs(self) -> float:
        m = self.coefficient_matrix
        return float(np.abs(m).max()) if m.size else 0.0

    def is_zero(self, atol: float = ZERO_ATOL) -> bool:
        # the anchors are linearly independent functions, so zero means zero coefficients
        return self.max_abs() <= atol


def resolvent_coefficients(
    config: Configuration, expansion: LaurentExpansion | None = None
) -> tuple[RankNOperator, RankNOperator]:
    """R_-2 and R_-1 of the resolvent at z = 0.

    Expanding G_z^y = G_0^y + z * i/(4 pi) + O(z^2) in the rank-N correction:
    R_-2 carries A_-2 on the anchors G_0^{y_j}; R_-1 carries A_-1 on the same
    anchors plus A_-2 coupled to the constant anchor i/(4 pi) on either side.
    """
    if expansion is None:
        expansion = laurent_expansion(config, "closed")
    a2, a1 = expansion.a_minus2, expansion.a_minus1
    n = config.n
    greens = tuple(Anchor(np.array(y, dtype=float), 0.0) for y in config.centers)
    const = Anchor(None, 0.0, 1j / FOUR_PI)
    r2 = RankNOperator(a2.copy(), greens, greens)
    big = np.zeros((n + 1, n + 1), dtype=complex)
    big[:n, :n] = a1
    big[:n, n] = a2 @ np.ones(n)
    big[n, :n] = np.ones(n) @ a2
    r1 = RankNOperator(big, greens + (const,), greens + (const,))
    return r2, r1


def resolvent_kernel(config: Configuration, z: complex, x, xp) -> complex:
    """Integral kernel of (-Delta_{alpha,Y} - z^2)^-1 at (x, x').

    Uses the entire continuation of Gamma, so any z where Gamma(z) is invertible
    is accepted; the physical sheet is Im z > 0.
    """
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    r_free = float(np.linalg.norm(x - xp))
    if r_free == 0.0:
        raise CoincidentPoints("x and x' coincide")
    rx = np.linalg.norm(config.centers - x[None, :], axis=1)
    rxp = np.linalg.norm(config.centers - xp[None, :], axis=1)
    if np.any(rx == 0.0) or np.any(rxp == 0.0):
        raise CoincidentWithCenter("x or x' coincides with a center")
    z = complex(z)
    gam = gamma_matrix(config, z)
    sv = np.linalg.svd(gam, compute_uv=False)
    if sv[-1] <= SINGULAR_RTOL * sv[0]:
        raise GammaSingular(f"Gamma({z}) is singular")
    gx = np.exp(1j * z * rx) / (FOUR_PI * rx)
    gxp = np.exp(1j * z * rxp) / (FOUR_PI * rxp)
    free = np.exp(1j * z * r_free) / (FOUR_PI * r_free)
    return complex(free + gx @ np.linalg.solve(gam, gxp))
