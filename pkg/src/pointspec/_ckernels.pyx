# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot kernels (see _pykernels.py for the reference)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, cos, sin, M_PI

cnp.import_array()

cdef double FOUR_PI = 4.0 * M_PI


def pair_distances(centers):
    cdef const double[:, ::1] c = np.ascontiguousarray(centers, dtype=np.float64)
    cdef Py_ssize_t n = c.shape[0], j, k
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] d = out
    cdef double dx, dy, dz, r
    for j in range(n):
        for k in range(j + 1, n):
            dx = c[j, 0] - c[k, 0]
            dy = c[j, 1] - c[k, 1]
            dz = c[j, 2] - c[k, 2]
            r = sqrt(dx * dx + dy * dy + dz * dz)
            d[j, k] = r
            d[k, j] = r
    return out


def gamma_batch(dist, alphas, zs):
    cdef const double[:, ::1] d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double complex[::1] z = np.ascontiguousarray(
        np.asarray(zs, dtype=np.complex128).reshape(-1))
    cdef Py_ssize_t m = z.shape[0], n = d.shape[0], i, j, k
    out = np.empty((m, n, n), dtype=np.complex128)
    cdef double complex[:, :, ::1] g = out
    cdef double zr, zi, r, mag, ph
    cdef double complex val
    for i in range(m):
        zr = z[i].real
        zi = z[i].imag
        for j in range(n):
            # alpha_j - i z / (4 pi)
            g[i, j, j] = (a[j] + zi / FOUR_PI) - 1j * (zr / FOUR_PI)
            for k in range(j + 1, n):
                r = d[j, k]
                # exp(i z r) = exp(-zi r) * (cos(zr r) + i sin(zr r))
                mag = exp(-zi * r) / (FOUR_PI * r)
                ph = zr * r
                val = -(mag * cos(ph) + 1j * (mag * sin(ph)))
                g[i, j, k] = val
                g[i, k, j] = val
    return out


def gamma_imag(dist, alphas, lams):
    cdef const double[:, ::1] d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef const double[::1] a = np.ascontiguousarray(alphas, dtype=np.float64)
    cdef const double[::1] lam = np.ascontiguousarray(
        np.asarray(lams, dtype=np.float64).reshape(-1))
    cdef Py_ssize_t m = lam.shape[0], n = d.shape[0], i, j, k
    out = np.empty((m, n, n), dtype=np.float64)
    cdef double[:, :, ::1] g = out
    cdef double r, val
    for i in range(m):
        for j in range(n):
            g[i, j, j] = a[j] + lam[i] / FOUR_PI
            for k in range(j + 1, n):
                r = d[j, k]
                val = -exp(-lam[i] * r) / (FOUR_PI * r)
                g[i, j, k] = val
                g[i, k, j] = val
    return out


def distance_form(dist, v):
    cdef const double[:, ::1] d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(v, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0], j, k
    cdef double acc = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            acc += d[j, k] * w[j] * w[k]
    return 2.0 * acc


def gap_form(yt, v):
    order = np.argsort(np.asarray(yt, dtype=np.float64), kind="stable")
    cdef const double[::1] ys = np.ascontiguousarray(np.asarray(yt, dtype=np.float64)[order])
    cdef const double[::1] w = np.ascontiguousarray(np.asarray(v, dtype=np.float64)[order])
    cdef Py_ssize_t n = ys.shape[0], i
    cdef double above = 0.0, acc = 0.0
    # walk from the top so that `above` is the sum of v strictly above gap i
    for i in range(n - 1, 0, -1):
        above += w[i]
        acc += (ys[i] - ys[i - 1]) * above * above
    return -2.0 * acc
