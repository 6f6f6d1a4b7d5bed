"""Low-level numerical kernels: banded LDL^T pivot counting and cyclic Jacobi.

Both kernels are compiled with numba when it is importable and fall back to
numpy reference implementations otherwise.  The two code paths implement the
same algorithm and are cross-checked against each other in the test suite.

Band storage convention: for a symmetric matrix A with half-bandwidth p, the
array band has shape (n, p+1) with band[j, r] = A[j+r, j] for j+r < n.
Entries with j+r >= n are padding and are never read.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if len(args) == 1 and callable(args[0]):
            return args[0]
        return wrap


# ---------------------------------------------------------------------------
# banded LDL^T with negative pivot count
# ---------------------------------------------------------------------------

def _band_ldl_negcount_py(band: np.ndarray, pivot_floor: float) -> tuple[int, int]:
    """Reference implementation of band_ldl_negcount (numpy, slower).

    Destroys band in place.  Returns (negative_pivot_count, -1) on success or
    (-1, j) when pivot j falls below pivot_floor in magnitude.
    """
    n, w = band.shape
    p = w - 1
    neg = 0
    for j in range(n):
        d = band[j, 0]
        if abs(d) < pivot_floor:
            return -1, j
        if d < 0.0:
            neg += 1
        m = min(p, n - 1 - j)
        for r in range(1, m + 1):
            ljr = band[j, r] / d
            if ljr != 0.0:
                band[j + r, : m - r + 1] -= ljr * band[j, r : m + 1]
    return neg, -1


@njit(cache=True, nogil=True)
def _band_ldl_negcount_nb(band, pivot_floor):  # pragma: no cover - compiled
    n, w = band.shape
    p = w - 1
    neg = 0
    for j in range(n):
        d = band[j, 0]
        if abs(d) < pivot_floor:
            return -1, j
        if d < 0.0:
            neg += 1
        m = p
        if n - 1 - j < p:
            m = n - 1 - j
        for r in range(1, m + 1):
            ljr = band[j, r] / d
            if ljr != 0.0:
                for c in range(m - r + 1):
                    band[j + r, c] -= ljr * band[j, r + c]
    return neg, -1


def band_ldl_negcount(band: np.ndarray, pivot_floor: float) -> tuple[int, int]:
    """Count negative pivots of the LDL^T factorization of a banded symmetric matrix.

    band uses the (n, p+1) column-lowers layout described in the module
    docstring and is destroyed in place.  By Sylvester's law of inertia the
    negative pivot count of A - lam*I equals the number of eigenvalues of A
    strictly below lam (below lam's own cluster, given a safe pivot_floor).

    Returns (count, -1), or (-1, j) if pivot j has magnitude below
    pivot_floor, which signals that lam needs a jitter retry.
    """
    if band.ndim != 2 or band.dtype != np.float64 or not band.flags.c_contiguous:
        raise ValueError("band must be a C-contiguous float64 array of shape (n, p+1)")
    if HAVE_NUMBA:
        return _band_ldl_negcount_nb(band, pivot_floor)
    return _band_ldl_negcount_py(band, pivot_floor)


# ---------------------------------------------------------------------------
# cyclic Jacobi eigenvalue iteration
# ---------------------------------------------------------------------------

def _off_norm(a: np.ndarray) -> float:
    return math.sqrt(max(0.0, float(np.sum(a * a)) - float(np.sum(np.diag(a) ** 2))))


def _jacobi_sweeps_py(a: np.ndarray, tol: float, max_sweeps: int) -> float:
    """Reference cyclic Jacobi (numpy row/column rotations).  Mutates a."""
    n = a.shape[0]
    off = _off_norm(a)
    for _ in range(max_sweeps):
        if off <= tol:
            return off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (tau - math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                app, aqq = a[p, p], a[q, q]
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
        off = _off_norm(a)
    return off


def jacobi_sweeps(a: np.ndarray, tol: float, max_sweeps: int) -> float:
    """Diagonalize a symmetric matrix in place by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops to tol or max_sweeps
    is exhausted; returns the final off-diagonal norm (the caller decides
    whether that counts as converged).  Eigenvalues end up on the diagonal.
    """
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.dtype != np.float64:
        raise ValueError("a must be a square float64 array")
    if not a.flags.c_contiguous:
        raise ValueError("a must be C-contiguous")
    if HAVE_NUMBA:
        return _jacobi_sweeps_nb(a, tol, max_sweeps)
    return _jacobi_sweeps_py(a, tol, max_sweeps)


@njit(cache=True, nogil=True)
def _jacobi_sweeps_nb(a, tol, max_sweeps):  # pragma: no cover - compiled
    n = a.shape[0]
    off2 = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            off2 += 2.0 * a[i, j] * a[i, j]
    off = math.sqrt(off2)
    for _ in range(max_sweeps):
        if off <= tol:
            return off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (tau - math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                app = a[p, p]
                aqq = a[q, q]
                for r in range(n):
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = c * arp - s * arq
                    a[r, q] = s * arp + c * arq
                for r in range(n):
                    a[p, r] = a[r, p]
                    a[q, r] = a[r, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
        off2 = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off2 += 2.0 * a[i, j] * a[i, j]
        off = math.sqrt(off2)
    return off
