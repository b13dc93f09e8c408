"""Closed-form thresholds and rate/distance bounds for (j, ell)-limited
LDPC codes.

All the quantities here are driven by the degree bound z = (ell-1)*j of
the qubit connectivity graph: the site-percolation tail threshold
p0 = 1/(z-1), the per-site tail base alpha_z, the depolarizing bound p1
defined by 4 p1 (1-p1) = p0^2 (1-p0)^(2(z-2)), the measurement-error
variant with z' = j(ell+1), an upper bound on the achievable rate, and
a Gilbert-Varshamov-style implicit equation for the typical relative
distance of random regular code ensembles.

Tail products are evaluated in log space; alpha_z^s underflows for s in
the thousands otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

from .codes import BudgetExceededError


def percolation_threshold(j: int, ell: int) -> float:
    """Site/bond tail threshold 1/(z-1) with z = (ell-1)*j."""
    z = (ell - 1) * j
    if z < 2:
        raise ValueError(f"degree bound z = {z} must be at least 2")
    return 1.0 / (z - 1)


def alpha_z(p: float, z: int) -> float:
    """Per-site tail base p(1-p)^(z-2) / (p0(1-p0)^(z-2)); equals 1 at p0."""
    if z < 3:
        raise ValueError("z must be at least 3")
    if not 0.0 <= p < 1.0:
        raise ValueError("p must lie in [0, 1)")
    p0 = 1.0 / (z - 1)
    return (p * (1.0 - p) ** (z - 2)) / (p0 * (1.0 - p0) ** (z - 2))


def depolarizing_coefficient(z: int) -> float:
    """c = p0^2 (1-p0)^(2(z-2)), the defining constant for p1."""
    if z < 3:
        raise ValueError("z must be at least 3")
    p0 = 1.0 / (z - 1)
    return p0**2 * (1.0 - p0) ** (2 * (z - 2))


def depolarizing_bound(z: int) -> float:
    """Smaller root p1 of 4 p (1-p) = p0^2 (1-p0)^(2(z-2)).

    Computed as c / (2 (1 + sqrt(1-c))), which avoids the cancellation
    in (1 - sqrt(1-c))/2 for small c.  The root always satisfies
    p1 < p0 < 1/2; c itself exceeds [e(z-1)]^-2 for every finite z and
    approaches it from above as z grows.
    """
    c = depolarizing_coefficient(z)
    p1 = c / (2.0 * (1.0 + math.sqrt(1.0 - c)))
    assert 0.0 < p1 < 0.5
    assert c * (math.e * (z - 1)) ** 2 > 1.0
    return p1


def heuristic_depolarizing_bound(z: int) -> float:
    """Chain-counting estimate [2(z-1)]^-2, a factor e^2 above p1."""
    return (2.0 * (z - 1)) ** -2


def spacetime_degree(j: int, ell: int) -> int:
    """Degree bound z' = j(ell+1) once syndrome-bit sites join the graph."""
    return j * (ell + 1)


def spacetime_bound(j: int, ell: int) -> float:
    """Error-rate bound [2e(z'-1)]^-2 for repeated noisy measurement."""
    zp = spacetime_degree(j, ell)
    return (2.0 * math.e * (zp - 1)) ** -2


def rate_bound(ell: int, z: int) -> float:
    """Upper bound on the rate of degree-limited codes whose distance
    grows as a power of the blocklength:
    1 - 2 / [z - 1 - (z-3)((z-2)/(z-1))^(ell-1)]."""
    if z < 4:
        raise ValueError("z must be at least 4")
    bracket = z - 1 - (z - 3) * ((z - 2) / (z - 1)) ** (ell - 1)
    if bracket <= 0:
        raise ValueError("degenerate bracket in rate bound")
    return 1.0 - 2.0 / bracket


def cluster_tail_bound(s: float, p: float, z: int) -> float:
    """Exponential-tail bound ((1-p)^2/(1-p0)^2) * alpha_z^s on the
    probability that a site belongs to a cluster of size s, for p < p0."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    p0 = 1.0 / (z - 1)
    log_alpha = (
        math.log(p)
        + (z - 2) * math.log1p(-p)
        - math.log(p0)
        - (z - 2) * math.log1p(-p0)
    )
    log_bound = 2.0 * (math.log1p(-p) - math.log1p(-p0)) + s * log_alpha
    try:
        return math.exp(log_bound)
    except OverflowError:
        return math.inf


def violating_set_tail(s: float, p: float, z: int) -> float:
    """Tail bound [4(1-p)/p]^(s/2) * ((1-p)^2/(1-p0)^2) * alpha_z^s on
    the probability that a site belongs to a connected size-s set at
    least half filled with errors."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    p0 = 1.0 / (z - 1)
    log_alpha = (
        math.log(p)
        + (z - 2) * math.log1p(-p)
        - math.log(p0)
        - (z - 2) * math.log1p(-p0)
    )
    log_bound = (
        (s / 2.0) * (math.log(4.0) + math.log1p(-p) - math.log(p))
        + 2.0 * (math.log1p(-p) - math.log1p(-p0))
        + s * log_alpha
    )
    try:
        return math.exp(log_bound)
    except OverflowError:
        return math.inf


# ── Gilbert-Varshamov-style ensemble distance ─────────────────────────


def entropy_nat(x: float) -> float:
    """Natural-log binary entropy; 0 at the endpoints."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log(1.0 - x)


@dataclass(frozen=True)
class GvSolution:
    """Typical relative distance of the random (h, v)-regular ensemble."""

    h: int
    v: int
    rate_c: float
    delta_c: float
    y_root: float


def _gv_y_root(delta: float, k_exp: int) -> float:
    """Positive root of (1+y)^(k-1) + (1-y)^(k-1)
    = (1-delta) [(1+y)^k + (1-y)^k], bracketed in (0, 1) for delta < 1/2."""

    def g(y: float) -> float:
        return (
            (1.0 + y) ** (k_exp - 1)
            + (1.0 - y) ** (k_exp - 1)
            - (1.0 - delta) * ((1.0 + y) ** k_exp + (1.0 - y) ** k_exp)
        )

    lo, hi = 0.0, 1.0
    if g(hi) >= 0.0:
        raise ValueError("no bracketing root for the ensemble equation")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gv_exponent(delta: float, h: int, v: int, k_exp: int | None = None) -> float:
    """Annealed codeword-count exponent H(delta) + (1 - R_c) p_v(delta).

    Negative values mean weight-(delta n) codewords are exponentially
    unlikely in the ensemble.  `k_exp` overrides the exponent used inside
    p_v and the root equation; the standard regular-ensemble form uses
    the check degree v.
    """
    k = v if k_exp is None else k_exp
    y = _gv_y_root(delta, k)
    p_v = (
        math.log((1.0 + y) ** k / 2.0 + (1.0 - y) ** k / 2.0)
        - delta * v * math.log(y)
        - v * entropy_nat(delta)
    )
    return entropy_nat(delta) + (h / v) * p_v


def gv_distance(
    h: int, v: int, k_exp: int | None = None, tol: float = 1e-8
) -> GvSolution:
    """Largest delta in (0, 1/2) with non-positive ensemble exponent.

    Scans upward for the sign change and bisects the bracket to `tol`.
    Requires 2 <= h < v.
    """
    if not 2 <= h < v:
        raise ValueError("need 2 <= h < v")
    k = v if k_exp is None else k_exp

    lo = None
    hi = None
    steps = 2000
    prev_delta, prev_val = None, None
    for i in range(1, steps):
        delta = 0.5 * i / steps
        val = gv_exponent(delta, h, v, k)
        if prev_val is not None and prev_val <= 0.0 < val:
            lo, hi = prev_delta, delta
            break
        prev_delta, prev_val = delta, val
    if lo is None:
        raise ValueError("ensemble exponent never changes sign on (0, 1/2)")

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gv_exponent(mid, h, v, k) <= 0.0:
            lo = mid
        else:
            hi = mid
    delta_c = lo
    return GvSolution(
        h=h,
        v=v,
        rate_c=1.0 - h / v,
        delta_c=delta_c,
        y_root=_gv_y_root(delta_c, k),
    )


# ── blocklength estimate ─────────────────────────────────────────────


def qhpc_degree_bound(h: int, v: int) -> int:
    """Sector degree bound z = v(v+h-1) for products of (h, v)-regular
    seeds with their transposes."""
    return v * (v + h - 1)


def default_blocklength_error_rate(h: int, v: int) -> float:
    """Documented default operating point for blocklength estimates:
    one tenth of the provable depolarizing bound p1 for the family."""
    return depolarizing_bound(qhpc_degree_bound(h, v)) / 10.0


def min_blocklength(
    h: int,
    v: int,
    p: float | None = None,
    pf_per_cycle: float = 1e-9,
    k_exp: int | None = None,
) -> int:
    """Smallest blocklength n meeting a per-cycle failure budget.

    Uses the family's ensemble distance d(n) = delta_c * v * sqrt(n) /
    sqrt(h^2 + v^2) and requires

        M * violating_set_tail(d(n), p, z) * d(n) / n <= pf_per_cycle

    with M = 2 v (v+h-1) syndrome measurements per cycle and
    z = v(v+h-1).  When `p` is omitted the documented default
    p1(z)/10 is used; candidates with d(n) < 1 are excluded.
    """
    z = qhpc_degree_bound(h, v)
    m_count = 2 * z
    if p is None:
        p = default_blocklength_error_rate(h, v)
    gv = gv_distance(h, v, k_exp)
    kappa = gv.delta_c * v / math.hypot(h, v)

    def satisfied(n: int) -> bool:
        d = kappa * math.sqrt(n)
        if d < 1.0:
            return False
        return m_count * violating_set_tail(d, p, z) * d / n <= pf_per_cycle

    n_floor = max(1, math.ceil((1.0 / kappa) ** 2))
    while not satisfied(n_floor) and kappa * math.sqrt(n_floor) < 1.0:
        n_floor += 1

    n = n_floor
    cap = 10**9
    while n <= cap and not satisfied(n):
        n *= 2
    if n > cap:
        raise BudgetExceededError(
            f"no blocklength up to {cap} meets pf_per_cycle={pf_per_cycle} at p={p}"
        )
    lo, hi = max(n_floor, n // 2), n
    if satisfied(lo):
        return lo
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if satisfied(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ── report bundle ────────────────────────────────────────────────────


@dataclass(frozen=True)
class BoundsReport:
    """All degree-driven bounds for one (j, ell) pair."""

    j: int
    ell: int
    z: int
    p0: float
    p1: float
    p1_heuristic: float
    z_prime: int
    p_ft: float
    rate_bound: float


def bounds_report(j: int, ell: int) -> BoundsReport:
    z = (ell - 1) * j
    return BoundsReport(
        j=j,
        ell=ell,
        z=z,
        p0=percolation_threshold(j, ell),
        p1=depolarizing_bound(z),
        p1_heuristic=heuristic_depolarizing_bound(z),
        z_prime=spacetime_degree(j, ell),
        p_ft=spacetime_bound(j, ell),
        rate_bound=rate_bound(ell, z),
    )


def report_to_dict(report: BoundsReport) -> dict:
    return asdict(report)


def report_to_json(report: BoundsReport) -> str:
    return json.dumps(report_to_dict(report), indent=2)


def report_from_dict(d: dict) -> BoundsReport:
    return BoundsReport(**d)
