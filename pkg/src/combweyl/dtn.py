"""Dirichlet-to-Neumann analysis of single tooth modes.

Separating variables in one tooth (width 1/(2q), height h, Dirichlet on the
walls and the far end) reduces each transverse mode k to a 1-D problem on
[0, h]: v'' + (lam - 4*pi^2*k^2*q^2) v = 0 with v(h) = 0.  The mode's
Dirichlet-to-Neumann value at the tooth opening is rho = -v'(0)/v(0).

Counting the modes with rho <= 0 bounds how far the comb's eigenvalue count
can exceed the decoupled square-plus-teeth count; square_mixed_gap supplies
the square's own contribution to that bound by comparing Neumann and
Dirichlet counts on the unit square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analytic import FOUR_PI_SQ, mode_cutoff
from .lattice import UNIT_SQUARE, count_rect_dirichlet, count_rect_neumann

# A propagating mode hits a pole of rho when sin(omega*h) vanishes; the test
# is relative to max(1, omega*h) so large arguments are judged fairly.
POLE_TOL = 1e-12


class DirichletPoleError(ValueError):
    """Raised when lam sits on a Dirichlet eigenvalue of the tooth mode, where rho blows up."""


@dataclass(frozen=True)
class DtnMode:
    """One transverse tooth mode and its Dirichlet-to-Neumann value.

    rho is None exactly when lam is a Dirichlet eigenvalue of the mode's 1-D
    problem (a pole of the Dirichlet-to-Neumann map).
    """

    k: int
    q: int
    h: float
    lam: float
    rho: float | None

    @property
    def is_pole(self) -> bool:
        return self.rho is None


def _check_mode_args(k: int, q: int, h: float, lam: float) -> None:
    for name, v in (("k", k), ("q", q)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be an int >= 1, got {v!r}")
    if not (isinstance(h, (int, float)) and math.isfinite(h)) or h <= 0.0:
        raise ValueError(f"h must be finite and > 0, got {h!r}")
    if not (isinstance(lam, (int, float)) and math.isfinite(lam)):
        raise ValueError(f"lambda must be finite, got {lam!r}")


def tooth_mode_eigenvalue(k: int, q: int, h: float, lam: float) -> float:
    """Dirichlet-to-Neumann value rho = -v'(0)/v(0) for transverse mode k.

    With s = lam - 4*pi^2*k^2*q^2 the solution vanishing at h gives

        s > 0:  rho = omega * cot(omega*h),   omega = sqrt(s)
        s = 0:  rho = 1/h
        s < 0:  rho = kappa * coth(kappa*h),  kappa = sqrt(-s)

    Raises DirichletPoleError when sin(omega*h) vanishes to POLE_TOL
    (relative to max(1, omega*h)), i.e. at a pole of rho.
    """
    _check_mode_args(k, q, h, lam)
    s = lam - FOUR_PI_SQ * (k * q) ** 2
    if s > 0.0:
        omega = math.sqrt(s)
        wh = omega * h
        sn = math.sin(wh)
        if abs(sn) < POLE_TOL * max(1.0, wh):
            raise DirichletPoleError(
                f"lambda={lam} is a Dirichlet eigenvalue of tooth mode k={k} "
                f"(omega*h = {wh} is a multiple of pi)")
        return omega * math.cos(wh) / sn
    if s < 0.0:
        kappa = math.sqrt(-s)
        # tanh saturates to 1 for large arguments, so this never overflows.
        return kappa / math.tanh(kappa * h)
    return 1.0 / h


def tooth_mode(k: int, q: int, h: float, lam: float) -> DtnMode:
    """Like tooth_mode_eigenvalue but returns a DtnMode, mapping poles to rho=None."""
    try:
        rho = tooth_mode_eigenvalue(k, q, h, lam)
    except DirichletPoleError:
        return DtnMode(k=k, q=q, h=float(h), lam=float(lam), rho=None)
    return DtnMode(k=k, q=q, h=float(h), lam=float(lam), rho=rho)


def count_nonpositive_tooth(q: int, h: float, lam: float) -> int:
    """Number of propagating modes k <= floor(sqrt(lam/q^2)/(2*pi)) with rho <= 0.

    Modes above the cutoff have rho > 0 and never contribute.  A pole inside
    the range propagates as DirichletPoleError.
    """
    if not isinstance(q, int) or isinstance(q, bool) or q < 1:
        raise ValueError(f"q must be an int >= 1, got {q!r}")
    if not (isinstance(lam, (int, float)) and math.isfinite(lam)):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    if lam <= 0.0:
        return 0
    cutoff = mode_cutoff(lam / (q * q))
    count = 0
    for k in range(1, cutoff + 1):
        if tooth_mode_eigenvalue(k, q, h, lam) <= 0.0:
            count += 1
    return count


def square_mixed_gap(lam: float) -> int:
    """Neumann minus Dirichlet eigenvalue count of the unit square at lam.

    Nonnegative for every lam; grows like the square's boundary term,
    about sqrt(lam) to leading order.
    """
    neu = count_rect_neumann(UNIT_SQUARE, lam).count
    dir_ = count_rect_dirichlet(UNIT_SQUARE, lam).count
    return neu - dir_
