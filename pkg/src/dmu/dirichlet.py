"""Local Dirichlet integrals, Dirichlet energies, mu-norms and inner products.

Two independent routes to the local integral D_p(f) are provided: the
difference quotient ``|f(l) - f(p)|^2 / |l - p|^2`` integrated directly, and
the decomposition into a Blaschke term, a singular term and a nonnegative
outer integrand.  The total energy is available as a weighted sum of local
integrals and as an area integral of ``|f'|^2 P_mu``.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import integrate

from .functions import StructuredFunction, h2_norm_sq, point_nodes
from .measures import AtomicMeasure, angle_of
from .parallel import ordered_map
from .quadrature import (DEFAULT_CONFIG, TWO_PI, EnergyValue, Nodes, QuadratureConfig,
                         RingSum, boundary_rule, circle_rule, graded_sum, radial_rule, ring_tail,
                         wrap)

__all__ = [
    "EnergyValue", "QuadratureConfig", "local_dirichlet_direct", "local_dirichlet_rs",
    "dirichlet_energy", "dirichlet_energy_area", "mu_norm_sq", "mu_inner",
]

SERIES_CUTOFF = 1e-4


def _chord_sq(nodes: Nodes, q: float) -> np.ndarray:
    s = np.sin(0.5 * nodes.rel(q))
    return 4.0 * s * s


def _function_breakpoints(f: StructuredFunction) -> list[float]:
    pts = list(f.special_points)
    for a, _ in f.blaschke:
        if abs(a) > 0.5:
            pts.append(cmath.phase(a))
    return pts


def _finish(res: RingSum, cfg: QuadratureConfig) -> EnergyValue:
    if res.diverged or not math.isfinite(res.value) or res.value > cfg.divergence_threshold:
        return EnergyValue.infinite()
    return EnergyValue(max(res.value, 0.0), res.error, False)


# direct difference quotient ---------------------------------------------------

def _window_half_width(f: StructuredFunction, theta: float, p: float) -> float:
    others = [p] + [q for q in _function_breakpoints(f) if q != theta]
    dist = [abs(float(wrap(q - theta))) for q in others]
    return min([0.5] + [0.5 * d for d in dist if d > 0])


def _cross_term(f: StructuredFunction, theta: float, mass: float, width: float,
                p: float, c: complex) -> tuple[float, float]:
    """-2 Re int f(l) conj(c) / |l - p|^2 dt/2pi over the window around a singular atom.

    With s = cot(d/2) the atom's factor becomes exp(-/+ i mass s), so the
    window integral is a Fourier integral on [cot(width/2), inf).
    """
    rest = StructuredFunction(f.blaschke, tuple((q, m) for q, m in f.singular if q != theta),
                              f.outer)
    s0 = 1.0 / math.tan(0.5 * width)
    total, err = 0.0, 0.0
    for side in (1.0, -1.0):
        def amp(s, part):
            d = side * 2.0 * math.atan(1.0 / s)
            node = Nodes(t=np.array([theta + d]), h=np.zeros(1), anchor=np.array([theta]),
                         offset=np.array([d]))
            g = complex(rest.value(node)[0]) * c.conjugate()
            val = g / (4.0 * math.sin(0.5 * float(node.rel(p)[0])) ** 2) * 2.0 / (1.0 + s * s)
            return (val.real if part == "re" else val.imag) / TWO_PI

        # Re(e^{-i side m s} A) = Re A cos(ms) + side Im A sin(ms)
        rc, ec = integrate.quad(amp, s0, np.inf, args=("re",), weight="cos", wvar=mass,
                                limlst=200, epsabs=1e-14, full_output=1)[:2]
        rs, es = integrate.quad(amp, s0, np.inf, args=("im",), weight="sin", wvar=mass,
                                limlst=200, epsabs=1e-14, full_output=1)[:2]
        total += rc + side * rs
        err += ec + es
    return -2.0 * total, 2.0 * err


def local_dirichlet_direct(f: StructuredFunction, p, cfg: QuadratureConfig = DEFAULT_CONFIG
                           ) -> EnergyValue:
    """D_p(f) = int |f(l) - f(p)|^2 / |l - p|^2 dt/2pi by graded quadrature.

    Near a singular atom the boundary values oscillate without bound; there
    the integrand is split into the two squared moduli (smooth) and a cross
    term evaluated as a Fourier integral.
    """
    th = angle_of(p)
    c = f.radial_limit(th)
    if not cmath.isfinite(c):
        return EnergyValue.infinite()
    bps = [th] + _function_breakpoints(f)
    windows = []
    if c != 0:
        for q, m in f.singular:
            w = _window_half_width(f, q, th)
            windows.append((q, m, w))
            bps += [q - w, q + w]
    rule = boundary_rule(bps, cfg, bandwidth=f.bandwidth)
    nodes = rule.nodes
    chord = _chord_sq(nodes, th)
    with np.errstate(all="ignore"):
        if windows:
            inside = np.zeros(len(nodes), dtype=bool)
            for q, _, w in windows:
                inside |= np.abs(nodes.rel(q)) < w
            vals = np.empty(len(nodes))
            fv = f.value(Nodes(nodes.t[~inside], nodes.h[~inside], nodes.anchor[~inside],
                               nodes.offset[~inside]))
            vals[~inside] = np.abs(fv - c) ** 2 / chord[~inside]
            sub = Nodes(nodes.t[inside], nodes.h[inside], nodes.anchor[inside], nodes.offset[inside])
            vals[inside] = (np.exp(2.0 * f.log_modulus(sub)) + abs(c) ** 2) / chord[inside]
        else:
            vals = np.abs(f.value(nodes) - c) ** 2 / chord
    vals = np.where(chord == 0, 0.0, vals) if c == 0 else vals
    res = graded_sum(vals, rule, threshold=cfg.divergence_threshold)
    if res.diverged:
        return EnergyValue.infinite()
    value, err = res.value, res.error
    for q, m, w in windows:
        ct, ce = _cross_term(f, q, m, w, th, c)
        value += ct
        err += ce
    return _finish(RingSum(value, err, False), cfg)


# decomposition formula ----------------------------------------------------------

def _outer_integrand(v: np.ndarray) -> np.ndarray:
    """e^{2v} - 1 - 2v, nonnegative, with a series near v = 0."""
    series = v * v * (2.0 + v * (4.0 / 3.0 + v * (2.0 / 3.0)))
    with np.errstate(over="ignore"):
        full = np.expm1(2.0 * v) - 2.0 * v
    return np.where(np.abs(v) < SERIES_CUTOFF, series, full)


def local_dirichlet_rs(f: StructuredFunction, p, cfg: QuadratureConfig = DEFAULT_CONFIG
                       ) -> EnergyValue:
    """D_p(f) as Blaschke term + singular term + outer term."""
    th = angle_of(p)
    o = f.outer
    om = o.modulus_at(th)
    if math.isinf(om):
        return EnergyValue.infinite()
    zeta = complex(math.cos(th), math.sin(th))
    bps = [th] + _function_breakpoints(f)
    plain = not o.powers and o.grid is None
    if om == 0:
        rule = boundary_rule(bps, cfg, bandwidth=f.bandwidth)
        chord = _chord_sq(rule.nodes, th)
        with np.errstate(all="ignore"):
            vals = np.where(chord == 0, 0.0, np.exp(2.0 * o.log_modulus(rule.nodes)) / chord)
        return _finish(graded_sum(vals, rule, threshold=cfg.divergence_threshold), cfg)
    if any(q == th for q, _ in f.singular):
        return EnergyValue.infinite()
    om2 = om * om
    blaschke = math.fsum(m * (1.0 - abs(a) ** 2) / abs(zeta - a) ** 2 for a, m in f.blaschke)
    singular = math.fsum(2.0 * m / (4.0 * math.sin(0.5 * float(wrap(q - th))) ** 2)
                         for q, m in f.singular)
    value = (blaschke + singular) * om2
    err = 4 * np.finfo(float).eps * value
    if not plain:
        rule = boundary_rule(bps, cfg, bandwidth=f.bandwidth)
        chord = _chord_sq(rule.nodes, th)
        v = o.log_modulus(rule.nodes) - float(o.log_modulus(point_nodes(th))[0])
        with np.errstate(all="ignore"):
            vals = np.where(chord == 0, 0.0, om2 * _outer_integrand(v) / chord)
        res = graded_sum(vals, rule, threshold=cfg.divergence_threshold)
        if res.diverged:
            return EnergyValue.infinite()
        value += res.value
        err += res.error
    return _finish(RingSum(value, err, False), cfg)


# energies ------------------------------------------------------------------------

def dirichlet_energy(f: StructuredFunction, mu: AtomicMeasure,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> EnergyValue:
    """D_mu(f) = sum_j w_j D_{theta_j}(f)."""
    ex = mu.expanded
    locals_ = ordered_map(lambda th: local_dirichlet_rs(f, th, cfg), list(ex.theta))
    total = EnergyValue(0.0, 0.0, False)
    terms, errs = [], []
    for w, e in zip(ex.weight, locals_):
        if e.diverged:
            return EnergyValue.infinite()
        terms.append(w * e.value)
        errs.append(w * e.error_estimate)
    if not terms:
        return total
    value = math.fsum(terms)
    if value > cfg.divergence_threshold:
        return EnergyValue.infinite()
    return EnergyValue(value, math.fsum(errs), False)


def _area_rings(integrand, f: StructuredFunction, mu: AtomicMeasure, cfg: QuadratureConfig,
                extra_points=(), bandwidth: int = 0):
    """Ring sums of 2 int (1 - h) <integrand>_{dt/2pi} dh over h = 1 - r."""
    h, wh, ring = radial_rule(cfg)
    bps = list(mu.expanded.theta) + list(mu.accumulation_points) + list(extra_points)
    max_panel = TWO_PI * cfg.order / cfg.angular_nodes
    if bandwidth > 0:
        max_panel = min(max_panel, 3.0 * TWO_PI / bandwidth)

    def one_radius(i):
        rule = circle_rule(bps, cfg.boundary_panels + 20, cfg.order, max_panel, h=h[i],
                           min_scale=h[i] / 16.0)
        vals = integrand(rule.nodes)
        return np.sum(vals * rule.weights)

    ang = ordered_map(one_radius, range(h.size))
    ang = np.array(ang)
    contrib = 2.0 * (1.0 - h) * wh * ang
    sums = np.zeros(ring.max() + 1, dtype=contrib.dtype)
    np.add.at(sums, ring, contrib)
    return sums


def dirichlet_energy_area(f: StructuredFunction, mu: AtomicMeasure,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> EnergyValue:
    """(1/pi) int_D |f'|^2 P_mu dA by a radial x angular graded rule."""
    if mu.is_zero:
        return EnergyValue(0.0, 0.0, False)

    def integrand(nodes):
        d = f.derivative(nodes)
        return np.abs(d) ** 2 * mu.poisson_polar(nodes.h, nodes.t, nodes.anchor, nodes.offset)

    with np.errstate(all="ignore"):
        sums = _area_rings(integrand, f, mu, cfg, _function_breakpoints(f), f.bandwidth)
    if not np.all(np.isfinite(sums)):
        return EnergyValue.infinite()
    return _finish(ring_tail(sums), cfg)


def mu_norm_sq(f: StructuredFunction, mu: AtomicMeasure,
               cfg: QuadratureConfig = DEFAULT_CONFIG) -> EnergyValue:
    """||f||_mu^2 = ||f||_{H^2}^2 + D_mu(f)."""
    return h2_norm_sq(f, cfg) + dirichlet_energy(f, mu, cfg)


def mu_inner(f: StructuredFunction, g: StructuredFunction, mu: AtomicMeasure,
             cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """<f, g>_mu: boundary product plus (1/pi) int f' conj(g') P_mu dA."""
    for u in (f, g):
        if mu_norm_sq(u, mu, cfg).diverged:
            raise ValueError("mu_inner needs finite-energy arguments")
    pts = _function_breakpoints(f) + _function_breakpoints(g)
    band = max(f.bandwidth, g.bandwidth)
    rule = boundary_rule(pts, cfg, bandwidth=band)
    with np.errstate(all="ignore"):
        boundary = complex(np.sum(f.value(rule.nodes) * np.conj(g.value(rule.nodes)) * rule.weights))
    if mu.is_zero:
        return boundary

    def integrand(nodes):
        pm = mu.poisson_polar(nodes.h, nodes.t, nodes.anchor, nodes.offset)
        return f.derivative(nodes) * np.conj(g.derivative(nodes)) * pm

    with np.errstate(all="ignore"):
        sums = _area_rings(integrand, f, mu, cfg, pts, band)
    # geometric remainder toward r = 1, applied to real and imaginary parts
    area = complex(np.sum(sums))
    for part, unit in ((sums.real, 1.0), (sums.imag, 1j)):
        sign = 1.0 if part[-4:].sum() >= 0 else -1.0
        res = ring_tail(sign * part)
        if not res.diverged:
            area += unit * sign * (res.value - float(np.sum(sign * part)))
    return boundary + area
