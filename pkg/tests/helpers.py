"""Shared oracle helpers for the tests.

Everything here recomputes quantities by routes independent of the library
implementation (RK4 shooting, geometric membership scans, exact rational
least squares), so agreement is meaningful evidence rather than tautology.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from combweyl import (DomainSpec, assemble_dirichlet_operator, build_comb_grid,
                      build_rect_operator)


def rho_shooting(k: int, q: int, h: float, lam: float, steps: int = 20000) -> float:
    """Dirichlet-to-Neumann value of a tooth mode by RK4 shooting.

    Integrates v'' + (lam - 4*pi^2*k^2*q^2) v = 0 from v(h) = 0, v'(h) = -1
    backward to x = 0 with fixed-step RK4, then returns -v'(0)/v(0).
    """
    s = lam - 4.0 * math.pi ** 2 * (k * q) ** 2
    dx = -h / steps
    v, w = 0.0, -1.0
    for _ in range(steps):
        k1v, k1w = w, -s * v
        v2, w2 = v + 0.5 * dx * k1v, w + 0.5 * dx * k1w
        k2v, k2w = w2, -s * v2
        v3, w3 = v + 0.5 * dx * k2v, w + 0.5 * dx * k2w
        k3v, k3w = w3, -s * v3
        v4, w4 = v + dx * k3v, w + dx * k3w
        k4v, k4w = w4, -s * v4
        v += dx * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        w += dx * (k1w + 2.0 * k2w + 2.0 * k3w + k4w) / 6.0
    return -w / v


def comb_membership_nodes(q: int, h: float, s: int) -> list[tuple[int, int]]:
    """Interior lattice nodes of the comb by a pointwise geometric test.

    Scans every lattice point (i*delta, j*delta) with delta = 1/(2qs) and
    keeps those strictly inside the domain (square interior, or strictly
    inside a tooth column between the opening at y = 1 and the snapped top).
    Returns (j, i) pairs in row-major order, matching the grid's node ids.
    """
    x_cells = 2 * q * s
    h_rows = round(h * x_cells)
    nodes = []
    for j in range(0, x_cells + h_rows + 1):
        for i in range(0, x_cells + 1):
            if 0 < j < x_cells:
                inside = 0 < i < x_cells
            elif x_cells <= j < x_cells + h_rows:
                t = i // (2 * s)
                inside = 2 * s * t < i < 2 * s * t + s
            else:
                inside = False
            if inside:
                nodes.append((j, i))
    return nodes


def random_small_operator(rng: np.random.Generator):
    """A random rectangle or comb operator with n <= 400, plus a description."""
    if rng.random() < 0.5:
        m = int(rng.integers(1, 17))
        k = int(rng.integers(1, 17))
        delta = float(rng.uniform(0.04, 0.6))
        return (build_rect_operator(m, k, delta),
                f"rect(m={m},k={k},delta={delta:.4f})")
    while True:
        q = int(rng.integers(1, 4))
        s = int(rng.integers(1, 5))
        h = float(rng.uniform(0.2, 2.0))
        grid = build_comb_grid(DomainSpec(q, h), s)
        if grid.n <= 400:
            return (assemble_dirichlet_operator(grid),
                    f"comb(q={q},s={s},h={h:.4f})")


def gap_midpoints(eigs: np.ndarray, rng: np.random.Generator,
                  count: int) -> list[tuple[float, int]]:
    """(threshold, expected count) pairs placed in well-separated spectral gaps.

    Degenerate clusters (q-fold tooth modes) are resolved by the dense oracle
    only to rounding noise, so thresholds require a relative gap of 1e-7;
    draws also include below-minimum and above-maximum thresholds.
    """
    n = len(eigs)
    scale = max(1.0, float(abs(eigs[-1])))
    picks: list[tuple[float, int]] = []
    attempts = 0
    while len(picks) < count and attempts < 60 * count:
        attempts += 1
        i = int(rng.integers(-1, n))
        if i < 0:
            picks.append((float(eigs[0] - 1.0), 0))
        elif i == n - 1:
            picks.append((float(eigs[-1] + 1.0), n))
        elif eigs[i + 1] - eigs[i] > 1e-7 * scale:
            picks.append((float(0.5 * (eigs[i] + eigs[i + 1])), i + 1))
    return picks


def exact_quadratic_fit(qs: list[int], counts: list[int]) -> tuple[Fraction, Fraction]:
    """Solve the normal equations of N = c*q^2 + beta*q in exact rationals."""
    s4 = sum(Fraction(q) ** 4 for q in qs)
    s3 = sum(Fraction(q) ** 3 for q in qs)
    s2 = sum(Fraction(q) ** 2 for q in qs)
    b1 = sum(Fraction(n) * q * q for n, q in zip(counts, qs))
    b2 = sum(Fraction(n) * q for n, q in zip(counts, qs))
    det = s4 * s2 - s3 * s3
    c = (b1 * s2 - s3 * b2) / det
    beta = (s4 * b2 - s3 * b1) / det
    return c, beta
