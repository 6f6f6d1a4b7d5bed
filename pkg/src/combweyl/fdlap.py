"""Finite-difference Dirichlet Laplacian on comb domains, with inertia counting.

The comb is discretized on a uniform grid of spacing delta = 1/(2qs), which
makes the tooth width 1/(2q) exactly s cells and the tooth walls fall on
grid lines.  The tooth height is snapped to the nearest grid line.  The
5-point stencil gives a symmetric positive definite operator on the interior
nodes; eigenvalues at or below a threshold lam are counted by factoring
A - lam*I as LDL^T in band form and counting negative pivots (Sylvester's
law of inertia).  A dense cyclic-Jacobi eigensolver and the closed-form
rectangle FD spectrum serve as small-scale oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._kernels import band_ldl_negcount, jacobi_sweeps
from .analytic import DomainSpec
from .lattice import TIE_TOL, SpectralCount, tie_threshold

# Resource guard: q*s caps the cells per unit length (grid side <= 2*2048).
MAX_QS = 2048

# Dense oracle size cap.
DENSE_MAX_N = 400

# Pivot acceptance floor, relative to ||A||_inf, and the relative jitter
# applied to lambda on retry.  Jitter is positive so eigenvalues exactly at
# lambda stay counted (the "<=" convention).
PIVOT_FLOOR_REL = 1e-10
JITTER_REL = 1e-9
MAX_JITTER_STEPS = 3

JACOBI_MAX_SWEEPS = 100


class FactorizationError(RuntimeError):
    """LDL^T factorization hit a near-zero pivot even after jitter retries."""


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CombGrid:
    """Interior grid nodes of a comb domain at spacing delta = 1/(2qs).

    node_index maps lattice coordinates to node ids: node_index[j, i] is the
    id of the node at (i*delta, j*delta), or -1 if that point is not an
    interior node.  Ids are assigned row-major, scanning y upward and x
    rightward, so square rows come first, then the interface row y = 1
    (tooth openings only), then tooth rows.  xi and yi invert the map:
    node k sits at (xi[k]*delta, yi[k]*delta).
    """

    spec: DomainSpec
    s: int
    delta: float
    h_snapped: float
    n: int
    degenerate_teeth: bool
    node_index: np.ndarray
    xi: np.ndarray
    yi: np.ndarray

    def coords(self) -> np.ndarray:
        """Node positions as an (n, 2) float array of (x, y)."""
        return np.column_stack((self.xi * self.delta, self.yi * self.delta))


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """Symmetric 5-point stencil operator restricted to interior nodes.

    matrix is CSR with diagonal 4/delta^2 and -1/delta^2 between
    grid-adjacent interior nodes; bandwidth is the largest |row - col| over
    nonzeros under the grid's row-major node ordering.
    """

    matrix: sp.csr_matrix
    n: int
    bandwidth: int
    delta: float
    norm_inf: float


def build_comb_grid(spec: DomainSpec, s: int) -> CombGrid:
    """Lay out the interior nodes of spec at refinement s (delta = 1/(2qs)).

    Teeth are degenerate when s = 1 (zero interior columns) or when h snaps
    to zero rows; the grid then covers only the square interior and the
    degenerate_teeth flag is set instead of raising.
    """
    if not isinstance(s, int) or isinstance(s, bool) or s < 1:
        raise ValueError(f"s must be an int >= 1, got {s!r}")
    if spec.q * s > MAX_QS:
        raise ValueError(
            f"resource guard: q*s must be <= {MAX_QS}, got {spec.q * s}")
    x_cells = 2 * spec.q * s
    delta = 1.0 / x_cells
    h_rows = int(round(spec.h * x_cells))
    h_snapped = h_rows * delta
    degenerate = (s == 1) or (h_rows == 0)

    mask = np.zeros((x_cells + max(h_rows, 1) + 1, x_cells + 1), dtype=bool)
    mask[1:x_cells, 1:x_cells] = True
    if not degenerate:
        tooth_cols = np.zeros(x_cells + 1, dtype=bool)
        for t in range(spec.q):
            tooth_cols[2 * s * t + 1 : 2 * s * t + s] = True
        # Rows y = 1 (the open tooth mouths) through y = 1 + h_snapped - delta.
        mask[x_cells : x_cells + h_rows, :] = tooth_cols

    yi, xi = np.nonzero(mask)
    n = xi.shape[0]
    node_index = np.full(mask.shape, -1, dtype=np.int64)
    node_index[yi, xi] = np.arange(n, dtype=np.int64)
    return CombGrid(spec=spec, s=s, delta=delta, h_snapped=h_snapped, n=n,
                    degenerate_teeth=degenerate, node_index=node_index,
                    xi=xi, yi=yi)


def _assemble_from_index(node_index: np.ndarray, delta: float) -> DiscreteOperator:
    """5-point stencil assembly over any node_index layout (shared helper)."""
    mask = node_index >= 0
    n = int(mask.sum())
    d2 = 1.0 / (delta * delta)
    yi, xi = np.nonzero(mask)
    rows = [np.arange(n, dtype=np.int64)]
    cols = [np.arange(n, dtype=np.int64)]
    vals = [np.full(n, 4.0 * d2)]
    for dj, di in ((0, 1), (1, 0)):
        has_nb = mask[yi + dj, xi + di]
        a = node_index[yi[has_nb], xi[has_nb]]
        b = node_index[yi[has_nb] + dj, xi[has_nb] + di]
        rows.append(np.concatenate((a, b)))
        cols.append(np.concatenate((b, a)))
        vals.append(np.full(2 * a.shape[0], -d2))
    matrix = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n))
    coo = matrix.tocoo()
    bandwidth = int(np.max(coo.row - coo.col)) if coo.nnz else 0
    norm_inf = float(np.max(np.abs(matrix).sum(axis=1)))
    return DiscreteOperator(matrix=matrix, n=n, bandwidth=bandwidth,
                            delta=delta, norm_inf=norm_inf)


def assemble_dirichlet_operator(grid: CombGrid) -> DiscreteOperator:
    """Assemble the 5-point Dirichlet Laplacian on a comb grid.

    Neighbors outside the domain contribute nothing (homogeneous Dirichlet),
    so the diagonal is uniformly 4/delta^2 and every off-diagonal entry is
    -1/delta^2 between grid-adjacent interior nodes.
    """
    return _assemble_from_index(grid.node_index, grid.delta)


def build_rect_operator(m_cols: int, k_rows: int, delta: float) -> DiscreteOperator:
    """5-point Dirichlet Laplacian on an m_cols x k_rows interior rectangle grid.

    The rectangle has sides (m_cols+1)*delta by (k_rows+1)*delta; nodes are
    ordered row-major by y then x, so the bandwidth equals m_cols.
    """
    for name, v in (("m_cols", m_cols), ("k_rows", k_rows)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be an int >= 1, got {v!r}")
    if not (isinstance(delta, (int, float)) and math.isfinite(delta)) or delta <= 0.0:
        raise ValueError(f"delta must be finite and > 0, got {delta!r}")
    if m_cols * k_rows > MAX_QS * MAX_QS:
        raise ValueError(
            f"resource guard: m_cols*k_rows must be <= {MAX_QS * MAX_QS}")
    node_index = np.full((k_rows + 2, m_cols + 2), -1, dtype=np.int64)
    ids = np.arange(m_cols * k_rows, dtype=np.int64).reshape(k_rows, m_cols)
    node_index[1 : k_rows + 1, 1 : m_cols + 1] = ids
    return _assemble_from_index(node_index, float(delta))


# ---------------------------------------------------------------------------
# inertia counting
# ---------------------------------------------------------------------------

def _lower_band_parts(op: DiscreteOperator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    coo = op.matrix.tocoo()
    keep = coo.row >= coo.col
    return coo.row[keep], coo.col[keep], coo.data[keep]


def inertia_count(op: DiscreteOperator, lam: float) -> SpectralCount:
    """Count eigenvalues of op at or below lam by negative-pivot counting.

    Factors op - lam*I as LDL^T in band form; by Sylvester's law the number
    of negative pivots equals the number of eigenvalues below the shift.
    The shift is jittered upward by JITTER_REL relative steps when a pivot
    magnitude falls below PIVOT_FLOOR_REL * ||op||_inf, so eigenvalues
    exactly at lam are counted; after MAX_JITTER_STEPS failed retries a
    FactorizationError is raised.  The tie_tol on the result records the
    jitter that was actually applied.
    """
    if not (isinstance(lam, (int, float)) and math.isfinite(lam)):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    lam = float(lam)
    pivot_floor = PIVOT_FLOOR_REL * op.norm_inf
    rows, cols, data = _lower_band_parts(op)
    fail_at = -1
    for step in range(MAX_JITTER_STEPS + 1):
        shift = lam * (1.0 + step * JITTER_REL)
        band = np.zeros((op.n, op.bandwidth + 1))
        band[cols, rows - cols] = data
        band[:, 0] -= shift
        neg, fail_at = band_ldl_negcount(band, pivot_floor)
        del band
        if neg >= 0:
            return SpectralCount(lam, neg, "fd_inertia", step * JITTER_REL)
    raise FactorizationError(
        f"pivot magnitude below {pivot_floor:.3e} at index {fail_at} for "
        f"lambda={lam} after {MAX_JITTER_STEPS} jitter retries")


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def fd_rect_count_closed_form(m_cols: int, k_rows: int, delta: float,
                              lam: float) -> SpectralCount:
    """Exact count of discrete rectangle eigenvalues at or below lam.

    The 5-point Laplacian on an m_cols x k_rows interior grid has eigenvalues
    (4/delta^2) * (sin^2(m*pi/(2*(m_cols+1))) + sin^2(k*pi/(2*(k_rows+1))))
    for 1 <= m <= m_cols, 1 <= k <= k_rows.
    """
    for name, v in (("m_cols", m_cols), ("k_rows", k_rows)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be an int >= 1, got {v!r}")
    if not (isinstance(delta, (int, float)) and math.isfinite(delta)) or delta <= 0.0:
        raise ValueError(f"delta must be finite and > 0, got {delta!r}")
    if not (isinstance(lam, (int, float)) and math.isfinite(lam)):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    lam = float(lam)
    sx = np.sin(np.arange(1, m_cols + 1) * (math.pi / (2.0 * (m_cols + 1)))) ** 2
    sy = np.sin(np.arange(1, k_rows + 1) * (math.pi / (2.0 * (k_rows + 1)))) ** 2
    vals = (4.0 / (delta * delta)) * (sx[:, None] + sy[None, :])
    count = int(np.count_nonzero(vals <= tie_threshold(lam)))
    return SpectralCount(lam, count, "closed_form_fd", TIE_TOL)


def dense_eig_oracle(op: DiscreteOperator) -> np.ndarray:
    """All eigenvalues of op, nondecreasing, via in-repo cyclic Jacobi.

    Limited to n <= DENSE_MAX_N.  The off-diagonal norm is driven to
    1e-12 relative to the Frobenius norm of the input (an absolute 1e-12
    is below the rounding floor of double precision once ||A|| is large).
    """
    if op.n > DENSE_MAX_N:
        raise ValueError(f"dense oracle limited to n <= {DENSE_MAX_N}, got {op.n}")
    a = op.matrix.toarray().astype(np.float64, copy=True)
    tol = 1e-12 * max(1.0, float(np.linalg.norm(a)))
    off = jacobi_sweeps(a, tol, JACOBI_MAX_SWEEPS)
    if off > tol:
        raise FactorizationError(
            f"Jacobi sweep stalled at off-norm {off:.3e} (tol {tol:.3e})")
    return np.sort(np.diagonal(a).copy())


def dense_count(op: DiscreteOperator, lam: float) -> SpectralCount:
    """Eigenvalue count at or below lam taken from the dense Jacobi oracle."""
    if not (isinstance(lam, (int, float)) and math.isfinite(lam)):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    lam = float(lam)
    eigs = dense_eig_oracle(op)
    count = int(np.count_nonzero(eigs <= tie_threshold(lam)))
    return SpectralCount(lam, count, "dense_oracle", TIE_TOL)
