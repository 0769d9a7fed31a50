"""Positivity of point capacities through the radial criterion integral.

A point p has positive capacity iff

    int_0^1 dh / (h P_mu((1 - h) p) + h^2) < inf.

Points carrying an atom and points off the closed support are decided
outright.  At accumulation points of a family the growth exponent beta in
P_mu((1 - h) p) ~ C h^{-beta} is estimated from a log-log fit over the range
of h that the truncated family resolves; the integral converges iff beta > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .measures import AtomicMeasure, UnitCirclePoint, angle_of
from .parallel import ordered_map
from .quadrature import gauss_legendre

BETA_TOL = 0.05
MAX_LEVEL = 60
MIN_FIT_POINTS = 6


class Verdict(str, Enum):
    POSITIVE = "Positive"
    ZERO = "Zero"
    UNDETERMINED = "Undetermined"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CapacityVerdict:
    verdict: Verdict
    criterion_integral_estimate: float
    growth_exponent_estimate: float
    truncation_stable: bool
    reason: str = ""

    @property
    def positive(self) -> bool:
        return self.verdict is Verdict.POSITIVE

    @property
    def zero(self) -> bool:
        return self.verdict is Verdict.ZERO

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value,
                "integral_estimate": self.criterion_integral_estimate,
                "exponent": self.growth_exponent_estimate,
                "stable": self.truncation_stable,
                "reason": self.reason}


def criterion_integrand(mu: AtomicMeasure, p, h) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    return 1.0 / (h * mu.radial_poisson(p, h) + h * h)


def criterion_partial(mu: AtomicMeasure, p, levels: int, order: int = 16) -> np.ndarray:
    """Criterion integral over each dyadic ring h in [2^{-k-1}, 2^{-k}], k < levels."""
    x, w = gauss_legendre(order)
    k = np.arange(levels)
    hi = 2.0 ** (-k)
    lo = 0.5 * hi
    h = lo[:, None] + (hi - lo)[:, None] * (x[None, :] + 1.0) * 0.5
    wh = (hi - lo)[:, None] * 0.5 * w[None, :]
    vals = criterion_integrand(mu, p, h.ravel()).reshape(h.shape)
    return np.sum(vals * wh, axis=1)


def _resolved_levels(mu: AtomicMeasure, p) -> int:
    """Number of dyadic levels in h below which the truncation is visible."""
    off = np.abs(mu.expanded.rel(angle_of(p)))
    off = off[off > 0]
    if off.size == 0:
        return MAX_LEVEL
    return int(np.clip(math.floor(math.log2(1.0 / (4.0 * off.min()))), 0, MAX_LEVEL))


def growth_exponent(mu: AtomicMeasure, p, levels: int | None = None) -> tuple[float, float, int]:
    """Fit log P = log C - beta log h over the last half of the resolved levels.

    Returns (beta, log C, number of fitted points).
    """
    if levels is None:
        levels = _resolved_levels(mu, p)
    k = np.arange(1, levels + 1)
    k = k[len(k) // 2:]
    if k.size < 2:
        return float("nan"), float("nan"), int(k.size)
    h = 2.0 ** (-k.astype(float))
    pv = mu.radial_poisson(p, h)
    slope, intercept = np.polyfit(np.log(h), np.log(pv), 1)
    return float(-slope), float(intercept), int(k.size)


def _decide(mu: AtomicMeasure, p) -> CapacityVerdict:
    th = angle_of(p)
    if mu.atom_at(th):
        rings = criterion_partial(mu, th, MAX_LEVEL)
        beta, _, _ = growth_exponent(mu, th, MAX_LEVEL)
        return CapacityVerdict(Verdict.POSITIVE, float(math.fsum(rings)), beta, True,
                               "atom at point")
    if mu.distance_to_support(th) > 0:
        beta, _, _ = growth_exponent(mu, th, 30)
        return CapacityVerdict(Verdict.ZERO, math.inf, beta, True,
                               "point off the closed support")
    levels = _resolved_levels(mu, th)
    beta, logc, npts = growth_exponent(mu, th, levels)
    partial = float(math.fsum(criterion_partial(mu, th, levels))) if levels else 0.0
    if npts < MIN_FIT_POINTS or not math.isfinite(beta):
        return CapacityVerdict(Verdict.UNDETERMINED, partial, beta, True,
                               "too few resolved levels for a fit")
    if beta > BETA_TOL:
        h_min = 2.0 ** (-levels)
        tail = h_min ** beta / (math.exp(logc) * beta)
        return CapacityVerdict(Verdict.POSITIVE, partial + tail, beta, True,
                               "Poisson integral grows like a negative power")
    if beta < -BETA_TOL:
        return CapacityVerdict(Verdict.ZERO, math.inf, beta, True,
                               "Poisson integral decays along the radius")
    return CapacityVerdict(Verdict.UNDETERMINED, partial, beta, True,
                           "growth exponent within tolerance of zero")


def point_capacity(mu: AtomicMeasure, p) -> CapacityVerdict:
    """Verdict on c_mu({p}) > 0, with stability under doubled family truncation."""
    if mu.is_zero:
        raise ValueError("point_capacity of the zero measure")
    v = _decide(mu, p)
    if not mu.families:
        return v
    w = _decide(mu.with_doubled_truncation(), p)
    return CapacityVerdict(v.verdict, v.criterion_integral_estimate, v.growth_exponent_estimate,
                           w.verdict is v.verdict, v.reason)


@dataclass(frozen=True)
class SetCapacity:
    """Aggregate verdict for a finite set; ``all_zero`` is None when undecided."""

    all_zero: bool | None
    verdicts: tuple = field(default=())

    def __bool__(self):
        return bool(self.all_zero)


def countable_set_capacity_zero(mu: AtomicMeasure, points) -> SetCapacity:
    """Capacity-zero test for a finite set, assuming countable subadditivity."""
    thetas = [angle_of(p) for p in points]
    if len(set(thetas)) != len(thetas):
        raise ValueError("points must be distinct")
    verdicts = tuple(ordered_map(lambda t: point_capacity(mu, t), thetas))
    if any(v.positive for v in verdicts):
        return SetCapacity(False, verdicts)
    if all(v.zero for v in verdicts):
        return SetCapacity(True, verdicts)
    return SetCapacity(None, verdicts)


def positive_capacity_atoms(mu: AtomicMeasure) -> list[UnitCirclePoint]:
    """Atoms and accumulation points of mu whose capacity is judged positive."""
    pts = [UnitCirclePoint(float(t)) for t in mu.expanded.theta]
    seen = set(pts)
    for s in mu.accumulation_points:
        q = UnitCirclePoint(s)
        if q not in seen and point_capacity(mu, s).positive:
            pts.append(q)
            seen.add(q)
    return sorted(pts, key=lambda q: q.theta)
