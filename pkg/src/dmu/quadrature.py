"""Graded Gauss-Legendre rules on the unit circle and in the disc.

Integrands in this package are singular (or nearly so) only at a finite set
of circle points: atoms of the measure, power-factor points of an outer
modulus, the point at which a local Dirichlet integral is taken.  Every rule
here splits the circle at those breakpoints and refines geometrically toward
each of them.  Nodes remember the breakpoint they were graded toward together
with their exact offset from it, so that chord lengths such as
``|e^{it} - e^{iq}|`` keep full relative accuracy down to offsets of 1e-12.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


def canonical_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t -= TWO_PI
    return t


def wrap(d):
    """Reduce angle differences to [-pi, pi)."""
    return np.mod(np.asarray(d, dtype=float) + math.pi, TWO_PI) - math.pi


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@dataclass(frozen=True)
class QuadratureConfig:
    """Resolution knobs shared by all quadratures.

    ``boundary_panels`` is the dyadic refinement depth toward each boundary
    breakpoint, ``radial_nodes`` the number of radial nodes of the area rule
    (clustered geometrically at r = 1) and ``angular_nodes`` sets the coarsest
    panel length of angular rules.
    """

    boundary_panels: int = 40
    radial_nodes: int = 256
    angular_nodes: int = 1024
    divergence_threshold: float = 1e12
    order: int = 20

    def __post_init__(self):
        for name in ("boundary_panels", "radial_nodes", "angular_nodes", "order"):
            if int(getattr(self, name)) <= 0:
                raise ValueError(f"{name} must be positive")
        if not self.divergence_threshold > 1:
            raise ValueError("divergence_threshold must exceed 1")


DEFAULT_CONFIG = QuadratureConfig()


@dataclass
class Nodes:
    """Quadrature nodes z = (1 - h) e^{it}.

    ``anchor`` is the breakpoint angle a node was graded toward and
    ``offset = t - anchor`` is stored exactly.  Angles relative to any circle
    point ``q`` are obtained with :meth:`rel`.
    """

    t: np.ndarray
    h: np.ndarray
    anchor: np.ndarray
    offset: np.ndarray

    def rel(self, q: float) -> np.ndarray:
        """Angle of the nodes measured from ``q``, in [-pi, pi)."""
        d = wrap(self.t - q)
        return np.where(self.anchor == q, self.offset, d)

    @property
    def z(self) -> np.ndarray:
        return (1.0 - self.h) * np.exp(1j * self.t)

    def __len__(self):
        return self.t.size


def one_minus(h, d):
    """Accurate ``1 - (1 - h) e^{id}`` for small h and d."""
    e = np.exp(1j * d)
    return -np.expm1(1j * d) + h * e


def poisson_kernel(h, d):
    """``(1 - r^2) / |1 - r e^{id}|^2`` with r = 1 - h, accurate as r -> 1."""
    s = np.sin(0.5 * d)
    return h * (2.0 - h) / (h * h + 4.0 * (1.0 - h) * s * s)


@dataclass
class GradedRule:
    """Nodes, weights (summing to one for dt / 2pi) and ring labels.

    Nodes closest to breakpoint ``k`` carry ``end == k`` and ``level`` equal
    to the ring index (``depth`` marks the innermost panel).  Nodes on coarse
    filler panels carry ``end == -1``.
    """

    nodes: Nodes
    weights: np.ndarray
    end: np.ndarray
    level: np.ndarray
    depth: int
    breakpoints: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _panels_for_end(length, depth, max_panel):
    """Offsets ``[lo, hi]`` covering (0, length], graded toward 0."""
    lo, hi, lev = [], [], []
    outer = length
    for j in range(depth):
        inner = outer * 0.5
        n = max(1, int(math.ceil((outer - inner) / max_panel)))
        edges = np.linspace(inner, outer, n + 1)
        lo.extend(edges[:-1])
        hi.extend(edges[1:])
        lev.extend([j] * n)
        outer = inner
    lo.append(0.0)
    hi.append(outer)
    lev.append(depth)
    return np.array(lo), np.array(hi), np.array(lev)


def unique_breakpoints(points, tol=1e-14) -> np.ndarray:
    pts = sorted({canonical_angle(p) for p in points})
    out: list[float] = []
    for p in pts:
        if not out or p - out[-1] > tol:
            out.append(p)
    if len(out) > 1 and out[0] + TWO_PI - out[-1] <= tol:
        out.pop()
    return np.array(out, dtype=float)


def circle_rule(breakpoints, depth: int, order: int, max_panel: float,
                h: float = 0.0, min_scale: float | None = None) -> GradedRule:
    """Composite rule on the circle, graded toward every breakpoint.

    With ``min_scale`` the grading depth of each end is reduced so that the
    innermost panel is about ``min_scale`` long (used at interior radii,
    where the integrand is smooth on the scale of 1 - r).
    """
    bps = unique_breakpoints(list(breakpoints) or [0.0])
    x, w = gauss_legendre(order)
    nb = bps.size
    ts, os_, anc, ws, ends, levs = [], [], [], [], [], []
    for k in range(nb):
        a = bps[k]
        b = bps[(k + 1) % nb] + (TWO_PI if k + 1 >= nb else 0.0)
        half = 0.5 * (b - a)
        d = depth
        if min_scale is not None:
            d = int(np.clip(math.ceil(math.log2(max(half / min_scale, 2.0))), 1, depth))
        lo, hi, lev = _panels_for_end(half, d, max_panel)
        u = (lo[:, None] + (hi - lo)[:, None] * (x[None, :] + 1.0) * 0.5).ravel()
        wu = ((hi - lo)[:, None] * 0.5 * w[None, :]).ravel()
        lv = np.repeat(lev, order)
        # toward a (left end of the arc) and toward b (right end)
        for anchor, endk, sign in ((a, k, 1.0), (bps[(k + 1) % nb], (k + 1) % nb, -1.0)):
            off = sign * u
            base = a if sign > 0 else b
            ts.append(base + off)
            os_.append(off)
            anc.append(np.full(u.size, anchor))
            ws.append(wu)
            ends.append(np.full(u.size, endk))
            levs.append(lv)
    t = np.concatenate(ts)
    nodes = Nodes(t=t, h=np.full(t.size, float(h)), anchor=np.concatenate(anc),
                  offset=np.concatenate(os_))
    return GradedRule(nodes=nodes, weights=np.concatenate(ws) / TWO_PI,
                      end=np.concatenate(ends), level=np.concatenate(levs),
                      depth=depth, breakpoints=bps)


def boundary_rule(breakpoints, cfg: QuadratureConfig = DEFAULT_CONFIG,
                  bandwidth: int = 0) -> GradedRule:
    """Boundary rule at the resolution of ``cfg``.

    ``bandwidth`` is the highest Fourier mode present in the integrand (trig
    interpolated grid terms); coarse panels are shortened to resolve it.
    """
    max_panel = TWO_PI * cfg.order / cfg.angular_nodes
    if bandwidth > 0:
        max_panel = min(max_panel, 3.0 * TWO_PI / bandwidth)
    return circle_rule(breakpoints, cfg.boundary_panels, cfg.order, max_panel)


@dataclass
class RingSum:
    value: float
    error: float
    diverged: bool
    ratio: float = float("nan")


def _tail(c: np.ndarray, inner: float, total: float) -> RingSum:
    """Extrapolate ring sums ``c`` (outer to inner) geometrically.

    A pure power law ``u^{-p}`` near the breakpoint gives ring sums with
    constant ratio ``2^{p-1}``; the innermost panel is replaced by the
    geometric remainder.  Ratios at or above 0.99 mean the ring sums do not
    decay and the integral is declared divergent.
    """
    c = np.asarray(c, dtype=float)
    scale = max(abs(total), 1e-300)
    if c.size < 4 or np.all(np.abs(c[-4:]) <= 1e-15 * scale):
        return RingSum(inner, 0.0, False)
    last = c[-4:]
    if np.any(last <= 0):
        return RingSum(inner, abs(inner), False)
    ratios = last[1:] / last[:-1]
    rho = float(np.median(ratios))
    suffix = np.cumsum(c[::-1])[::-1]
    outside = total - inner - suffix  # everything outside ring j
    grow = c[-4:] / np.maximum(outside[-4:], 1e-300)
    if rho >= 0.99 or np.all(grow >= 0.10):
        return RingSum(float("inf"), float("inf"), True, rho)
    if np.ptp(ratios) > 0.05:
        return RingSum(inner, abs(inner) + abs(c[-1]), False, rho)
    geo = c[-1] * rho / (1.0 - rho)
    return RingSum(geo, abs(geo - inner), False, rho)


def graded_sum(values: np.ndarray, rule: GradedRule, watch=None,
               threshold: float = 1e12) -> RingSum:
    """Integrate sampled nonnegative ``values`` with tail control.

    ``watch`` restricts tail extrapolation and divergence detection to the
    listed breakpoints (default: all).
    """
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        return RingSum(float("inf"), float("inf"), True)
    contrib = values * rule.weights
    total = float(np.sum(contrib))
    bps = rule.breakpoints
    watch_idx = range(bps.size) if watch is None else [
        int(np.argmin(np.abs(wrap(bps - canonical_angle(q))))) for q in watch]
    value, err = total, 64 * np.finfo(float).eps * float(np.sum(np.abs(contrib)))
    for k in dict.fromkeys(watch_idx):
        sel = rule.end == k
        levels = rule.level[sel]
        ring = np.bincount(levels, weights=contrib[sel], minlength=rule.depth + 1)
        depth_here = int(levels.max()) if levels.size else 0
        c = ring[:depth_here]
        inner = ring[depth_here]
        res = _tail(c, inner, total)
        if res.diverged:
            return RingSum(float("inf"), float("inf"), True, res.ratio)
        value += res.value - inner
        err += res.error
    if value > threshold:
        return RingSum(float("inf"), float("inf"), True)
    return RingSum(value, err, False)


def radial_rule(cfg: QuadratureConfig = DEFAULT_CONFIG, order: int = 8):
    """Nodes in h = 1 - r on dyadic rings [2^{-k-1}, 2^{-k}].

    Returns (h, weights, ring index); weights integrate dh.
    """
    levels = max(4, cfg.radial_nodes // order)
    x, w = gauss_legendre(order)
    k = np.arange(levels)
    hi = 2.0 ** (-k)
    lo = hi * 0.5
    h = (lo[:, None] + (hi - lo)[:, None] * (x[None, :] + 1) * 0.5).ravel()
    wh = ((hi - lo)[:, None] * 0.5 * w[None, :]).ravel()
    return h, wh, np.repeat(k, order)


def ring_tail(ring_sums: np.ndarray) -> RingSum:
    """Sum ring contributions and add a geometric remainder toward r = 1."""
    ring_sums = np.asarray(ring_sums, dtype=float)
    total = float(np.sum(ring_sums))
    res = _tail(ring_sums, 0.0, total)
    if res.diverged:
        return res
    return RingSum(total + res.value, res.error, False, res.ratio)


@dataclass(frozen=True)
class EnergyValue:
    """A nonnegative integral that may be infinite."""

    value: float
    error_estimate: float
    diverged: bool

    def __post_init__(self):
        if self.diverged and not math.isinf(self.value):
            raise ValueError("diverged energies carry value +inf")

    @classmethod
    def infinite(cls) -> "EnergyValue":
        return cls(math.inf, math.inf, True)

    @classmethod
    def from_ring(cls, res: RingSum) -> "EnergyValue":
        if res.diverged:
            return cls.infinite()
        return cls(max(res.value, 0.0), res.error, False)

    def __add__(self, other: "EnergyValue") -> "EnergyValue":
        if self.diverged or other.diverged:
            return EnergyValue.infinite()
        return EnergyValue(self.value + other.value, self.error_estimate + other.error_estimate, False)

    def scaled(self, c: float) -> "EnergyValue":
        if self.diverged:
            return self
        return EnergyValue(c * self.value, c * self.error_estimate, False)

    def __float__(self):
        return float(self.value)
