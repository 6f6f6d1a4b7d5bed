"""Closed-form eigenvalue-count coefficients for comb domains.

A comb domain is the open unit square with q rectangular teeth attached
along its top edge.  Each tooth has width 1/(2q) and height h, and the
tooth openings start at the left edge, so tooth t occupies
[t/q, t/q + 1/(2q)] x [1, 1+h] for t = 0, ..., q-1.

Counting Dirichlet eigenvalues below the scaled threshold lambda = mu*q^2
gives N(mu*q^2) = c(mu)*q^2 + O(q), where

    c(mu) = mu/(4*pi) + (h/pi)*sqrt(mu) * sum_{l=1}^{m} sqrt(1 - 4*pi^2*l^2/mu)

and m = floor(sqrt(mu)/(2*pi)) counts the tooth cross-modes that propagate
at threshold mu.  The naive two-term Weyl expansion, fed the comb's area
1 + h/2 and perimeter 4 + 2*h*q, predicts a different coefficient

    c_weyl(mu) = (2+h)*mu/(8*pi) - h*sqrt(mu)/(2*pi).

This module evaluates both coefficients, their difference delta, and an
Euler-Maclaurin decomposition of delta that separates the endpoint, tail,
and oscillatory contributions of the mode sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

TWO_PI = 2.0 * math.pi
FOUR_PI_SQ = 4.0 * math.pi ** 2

# Below this magnitude a computed delta is reported as sign 0.
SIGN_ZERO_TOL = 1e-12


# ---------------------------------------------------------------------------
# domain description
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DomainSpec:
    """Comb domain with q teeth of width 1/(2q) and height h on the unit square."""

    q: int
    h: float

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or isinstance(self.q, bool):
            raise ValueError(f"q must be an int, got {type(self.q).__name__}")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if not (isinstance(self.h, (int, float)) and math.isfinite(self.h)):
            raise ValueError(f"h must be finite, got {self.h!r}")
        if self.h <= 0.0:
            raise ValueError(f"h must be > 0, got {self.h}")

    @property
    def area(self) -> float:
        """Total area: unit square plus q teeth of size (1/(2q)) x h."""
        return 1.0 + self.h / 2.0

    @property
    def perimeter(self) -> float:
        """Boundary length: 4 for the square outline plus 2h per tooth wall pair."""
        return 4.0 + 2.0 * self.h * self.q


@dataclass(frozen=True)
class EulerMaclaurinTerms:
    """Endpoint, tail, and periodic-part contributions to the mode-sum defect.

    All three are dimensionless; the defect c - c_weyl equals
    (h/pi)*sqrt(mu) * (endpoint - tail + periodic).
    """

    endpoint: float
    tail: float
    periodic: float


@dataclass(frozen=True)
class ConstantReport:
    """Evaluated count coefficients at a single (mu, h)."""

    mu: float
    h: float
    cutoff_m: int
    c: float
    c_weyl: float
    delta: float
    em_terms: EulerMaclaurinTerms | None = None

    @property
    def em_delta(self) -> float | None:
        """Delta reassembled from the Euler-Maclaurin terms, or None if absent."""
        if self.em_terms is None:
            return None
        t = self.em_terms
        return (self.h / math.pi) * math.sqrt(self.mu) * (t.endpoint - t.tail + t.periodic)


# ---------------------------------------------------------------------------
# coefficient formulas
# ---------------------------------------------------------------------------

def _check_mu_h(mu: float, h: float) -> None:
    if not (isinstance(mu, (int, float)) and math.isfinite(mu)) or mu <= 0.0:
        raise ValueError(f"mu must be finite and > 0, got {mu!r}")
    if not (isinstance(h, (int, float)) and math.isfinite(h)) or h <= 0.0:
        raise ValueError(f"h must be finite and > 0, got {h!r}")


def mode_cutoff(mu: float) -> int:
    """Number of tooth cross-modes below threshold: floor(sqrt(mu)/(2*pi)).

    This is the largest integer l with 4*pi^2*l^2 <= mu, i.e. the number of
    transverse tooth modes whose cutoff lies at or below mu.
    """
    if not (isinstance(mu, (int, float)) and math.isfinite(mu)) or mu <= 0.0:
        raise ValueError(f"mu must be finite and > 0, got {mu!r}")
    return int(math.floor(math.sqrt(mu) / TWO_PI))


def weyl_constant(mu: float, h: float) -> float:
    """Two-term Weyl prediction for the count coefficient.

    Equals (2+h)*mu/(8*pi) - h*sqrt(mu)/(2*pi), but is evaluated grouped as
    mu/(4*pi) + h*(mu - 4*sqrt(mu))/(8*pi).  The grouping is algebraically
    identical and shares its leading term with theorem_constant, so the
    difference of the two stays fully accurate near its zero at mu = 16.
    """
    _check_mu_h(mu, h)
    return mu / (4.0 * math.pi) + h * (mu - 4.0 * math.sqrt(mu)) / (8.0 * math.pi)


def theorem_constant(mu: float, h: float) -> float:
    """True count coefficient: bulk term plus one term per propagating tooth mode.

    c(mu) = mu/(4*pi) + (h/pi)*sqrt(mu) * sum_{l=1}^{m} sqrt(1 - 4*pi^2*l^2/mu)
    with m = mode_cutoff(mu).  The sum is accumulated with math.fsum.
    """
    _check_mu_h(mu, h)
    m = mode_cutoff(mu)
    terms = []
    for l in range(1, m + 1):
        r = 1.0 - FOUR_PI_SQ * l * l / mu
        # Clip the tiny negative that floor-boundary rounding can produce.
        terms.append(math.sqrt(r) if r > 0.0 else 0.0)
    return mu / (4.0 * math.pi) + (h / math.pi) * math.sqrt(mu) * math.fsum(terms)


def constant_report(mu: float, h: float) -> ConstantReport:
    """Evaluate c, c_weyl, and delta = c - c_weyl at one (mu, h)."""
    _check_mu_h(mu, h)
    c = theorem_constant(mu, h)
    cw = weyl_constant(mu, h)
    return ConstantReport(mu=float(mu), h=float(h), cutoff_m=mode_cutoff(mu),
                          c=c, c_weyl=cw, delta=c - cw)


# ---------------------------------------------------------------------------
# Euler-Maclaurin decomposition of delta
# ---------------------------------------------------------------------------

def _segment_integral(a: float, m: int) -> float:
    """Integral of sqrt(1 - x^2/a^2) from m to a, in closed form.

    With t = x/a this is a * integral_{m/a}^{1} sqrt(1-t^2) dt, a circular
    segment with antiderivative (t*sqrt(1-t^2) + asin(t))/2.
    """
    t0 = min(m / a, 1.0)
    seg = (math.pi / 4.0) - 0.5 * (t0 * math.sqrt(max(0.0, 1.0 - t0 * t0)) + math.asin(t0))
    return a * seg


def _periodic_part(a: float, m: int) -> float:
    """Integral of ({x} - 1/2) * f'(x) over [0, m] for f(x) = sqrt(1 - x^2/a^2).

    Integrated one unit interval [l-1, l] at a time.  On each interval the
    substitution x = a*sin(theta) turns the integrand into
    -(a*sin(theta) - (l-1) - 1/2) * sin(theta), which stays smooth even when
    the interval's right end hits x = a, where f' itself blows up.
    """
    total = 0.0
    for l in range(1, m + 1):
        th_lo = math.asin((l - 1) / a)
        th_hi = math.asin(min(l / a, 1.0))

        def integrand(theta: float, shift: float = (l - 1) + 0.5) -> float:
            return -(a * math.sin(theta) - shift) * math.sin(theta)

        val, _ = quad(integrand, th_lo, th_hi, epsabs=1e-12, epsrel=1e-12, limit=200)
        total += val
    return total


def em_decomposition(mu: float, h: float) -> ConstantReport:
    """Split delta = c - c_weyl into Euler-Maclaurin endpoint, tail, and periodic parts.

    Writing f(x) = sqrt(1 - 4*pi^2*x^2/mu) and a = sqrt(mu)/(2*pi), the mode
    sum over l = 1..m differs from the integral of f over [0, a] (which is the
    Weyl perimeter correction) by

        endpoint = f(m)/2
        tail     = integral of f from m to a      (closed-form circular segment)
        periodic = integral of ({x} - 1/2) f'(x) over [0, m]   (quadrature)

    and delta = (h/pi)*sqrt(mu) * (endpoint - tail + periodic).  Requires
    mu >= 4*pi^2 so that at least one mode propagates; below that threshold
    delta reduces to the elementary closed form h*(4*sqrt(mu) - mu)/(8*pi).
    """
    _check_mu_h(mu, h)
    m = mode_cutoff(mu)
    if m < 1:
        raise ValueError(
            f"em_decomposition requires mu >= 4*pi^2 (~{FOUR_PI_SQ:.6f}), got {mu!r}")
    a = math.sqrt(mu) / TWO_PI
    fm_sq = 1.0 - m * m / (a * a)
    endpoint = 0.5 * math.sqrt(max(0.0, fm_sq))
    tail = _segment_integral(a, m)
    periodic = _periodic_part(a, m)
    base = constant_report(mu, h)
    return ConstantReport(mu=base.mu, h=base.h, cutoff_m=m, c=base.c,
                          c_weyl=base.c_weyl, delta=base.delta,
                          em_terms=EulerMaclaurinTerms(endpoint, tail, periodic))


# ---------------------------------------------------------------------------
# sign scan
# ---------------------------------------------------------------------------

def crossover_scan(mu_grid: list[float], h: float) -> list[tuple[float, float, int]]:
    """Tabulate (mu, delta, sign) over a grid of thresholds.

    The sign is -1, 0, or +1, with |delta| <= 1e-12 reported as 0 so that the
    exact root of delta at mu = 16 (for any h) lands on sign 0 when sampled.
    The grid must be nonempty, strictly increasing, and positive.
    """
    if len(mu_grid) == 0:
        raise ValueError("mu_grid must be nonempty")
    prev = 0.0
    for mu in mu_grid:
        if not (isinstance(mu, (int, float)) and math.isfinite(mu)) or mu <= prev:
            raise ValueError(f"mu_grid must be strictly increasing and positive, got {mu!r}")
        prev = mu
    out = []
    for mu in mu_grid:
        d = theorem_constant(mu, h) - weyl_constant(mu, h)
        sign = 0 if abs(d) <= SIGN_ZERO_TOL else (1 if d > 0.0 else -1)
        out.append((float(mu), d, sign))
    return out
