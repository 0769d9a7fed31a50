"""Structured H^2 functions f = B * S * O.

B is a finite Blaschke product, S a singular inner function with finitely
many atoms and O an outer function whose boundary modulus is

    exp(log_constant) * prod_q |e^{it} - e^{iq}|^alpha_q * exp(g(t))

with g a real trigonometric interpolant of N equispaced samples.  The outer
factor has the closed form

    O(z) = exp(log_constant + H(z)) * prod_q (1 - e^{-iq} z)^alpha_q

where H is the analytic completion of g (so Re H = g on the circle).  The
normalisation O(0) > 0 is built in, and Blaschke factors use
(|a|/a)(a - z)/(1 - conj(a) z).  Two functions differing by a unimodular
constant therefore share one representation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .measures import UnitCirclePoint, angle_of
from .quadrature import (DEFAULT_CONFIG, TWO_PI, EnergyValue, Nodes, QuadratureConfig,
                         boundary_rule, canonical_angle, graded_sum, one_minus, wrap)

DEFAULT_GRID = 4096
ZERO_TOL = 1e-12


def _log_chord(d):
    """log|e^{id} - 1| for offsets d in [-pi, pi)."""
    with np.errstate(divide="ignore"):
        return np.log(2.0 * np.abs(np.sin(0.5 * d)))


def _scaled_log(coef, logs):
    """coef * logs with 0 * (-inf) = 0."""
    with np.errstate(invalid="ignore"):
        return np.where(coef == 0, 0.0, coef * logs)


def point_nodes(theta: float) -> Nodes:
    """A single boundary node sitting exactly on ``theta``."""
    th = canonical_angle(theta)
    return Nodes(t=np.array([th]), h=np.zeros(1), anchor=np.array([th]), offset=np.zeros(1))


def nodes_from_z(z) -> Nodes:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    t = np.angle(z)
    return Nodes(t=t, h=1.0 - np.abs(z), anchor=np.full(t.shape, np.nan), offset=np.zeros(t.shape))


def grid_nodes(n: int) -> np.ndarray:
    return TWO_PI * np.arange(n) / n


@dataclass(frozen=True)
class BoundaryModulus:
    """Outer boundary modulus from closed-form primitives."""

    log_constant: float = 0.0
    powers: tuple = ()
    grid: tuple | None = None

    def __post_init__(self):
        merged: dict[float, float] = {}
        for th, alpha in self.powers:
            alpha = float(alpha)
            th = canonical_angle(th)
            merged[th] = merged.get(th, 0.0) + alpha
        for th, alpha in merged.items():
            if not alpha > -0.5:
                raise ValueError(f"power factor exponent must exceed -1/2, got {alpha} at {th}")
        powers = tuple(sorted((th, a) for th, a in merged.items() if a != 0.0))
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "log_constant", float(self.log_constant))
        if self.grid is not None:
            g = tuple(float(x) for x in self.grid)
            if len(g) == 0:
                g = None
            elif not all(math.isfinite(x) for x in g):
                raise ValueError("grid log-modulus samples must be finite")
            object.__setattr__(self, "grid", g)

    @cached_property
    def _coeffs(self) -> np.ndarray | None:
        """Taylor coefficients of H, the analytic completion of the grid term."""
        if self.grid is None:
            return None
        g = np.asarray(self.grid)
        n = g.size
        c = np.fft.fft(g) / n
        m = n // 2
        out = np.zeros(m + 1, dtype=complex)
        out[0] = c[0].real
        out[1:m + (n % 2)] = 2.0 * c[1:m + (n % 2)]
        if n % 2 == 0 and m > 0:
            out[m] = c[m].real
        return out

    @cached_property
    def _dcoeffs(self) -> np.ndarray | None:
        c = self._coeffs
        if c is None:
            return None
        return np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(1, complex)

    @property
    def bandwidth(self) -> int:
        return 0 if self.grid is None else len(self.grid) // 2

    @property
    def bounded(self) -> bool:
        return all(a >= 0 for _, a in self.powers)

    def power_at(self, theta: float) -> float:
        th = canonical_angle(theta)
        for q, a in self.powers:
            if q == th:
                return a
        return 0.0

    def grid_H(self, z) -> np.ndarray:
        if self._coeffs is None:
            return np.zeros(np.shape(z), dtype=complex)
        return np.polynomial.polynomial.polyval(z, self._coeffs)

    def grid_log(self, t) -> np.ndarray:
        """The trigonometric interpolant g(t)."""
        return self.grid_H(np.exp(1j * np.asarray(t, dtype=float))).real

    def log_modulus(self, nodes: Nodes) -> np.ndarray:
        """log of the boundary modulus at boundary nodes."""
        out = np.full(nodes.t.shape, self.log_constant)
        if self.grid is not None:
            out = out + self.grid_log(nodes.t)
        for q, a in self.powers:
            out = out + a * _log_chord(nodes.rel(q))
        return out

    def value(self, nodes: Nodes) -> np.ndarray:
        """O at the nodes (boundary values by continuity)."""
        logv = np.full(nodes.t.shape, self.log_constant, dtype=complex)
        if self.grid is not None:
            logv = logv + self.grid_H(nodes.z)
        out = np.exp(logv)
        for q, a in self.powers:
            base = one_minus(nodes.h, nodes.rel(q))
            with np.errstate(divide="ignore", invalid="ignore"):
                out = out * base ** a
        return out

    def log_derivative(self, nodes: Nodes) -> np.ndarray:
        """O'/O at interior nodes."""
        out = np.zeros(nodes.t.shape, dtype=complex)
        if self._dcoeffs is not None:
            out = out + np.polynomial.polynomial.polyval(nodes.z, self._dcoeffs)
        for q, a in self.powers:
            out = out - a * np.exp(-1j * q) / one_minus(nodes.h, nodes.rel(q))
        return out

    def modulus_at(self, theta: float) -> float:
        """Boundary modulus at one point; 0 or inf at power points."""
        a = self.power_at(theta)
        if a > 0:
            return 0.0
        if a < 0:
            return math.inf
        return float(np.exp(self.log_modulus(point_nodes(theta))[0]))

    def to_dict(self) -> dict:
        return {"log_constant": self.log_constant,
                "powers": [{"theta": q, "alpha": a} for q, a in self.powers],
                "grid": list(self.grid) if self.grid is not None else []}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundaryModulus":
        try:
            powers = tuple((float(p["theta"]), float(p["alpha"])) for p in d.get("powers", []))
        except KeyError as exc:
            raise ValueError(f"outer.powers: missing field {exc}") from exc
        grid = d.get("grid") or None
        return cls(float(d.get("log_constant", 0.0)), powers, grid)


def _blaschke_factor(a: complex, z):
    if a == 0:
        return z
    return (abs(a) / a) * (a - z) / (1.0 - np.conj(a) * z)


def _blaschke_dfactor(a: complex, z):
    if a == 0:
        return np.ones_like(z)
    return (abs(a) / a) * (abs(a) ** 2 - 1.0) / (1.0 - np.conj(a) * z) ** 2


@dataclass(frozen=True)
class ZeroSet:
    """Closed zero-set descriptor: disc zeros, circle points and
    accumulation points of the disc zeros (always empty for finite data)."""

    disk_zeros: tuple = ()
    boundary_points: tuple = ()
    accumulation_points: tuple = ()

    @property
    def empty(self) -> bool:
        return not (self.disk_zeros or self.boundary_points or self.accumulation_points)


@dataclass(frozen=True)
class StructuredFunction:
    blaschke: tuple = ()
    singular: tuple = ()
    outer: BoundaryModulus = field(default_factory=BoundaryModulus)

    def __post_init__(self):
        zeros: list[list] = []
        for a, m in self.blaschke:
            a = complex(a)
            if int(m) != m or m < 1:
                raise ValueError(f"Blaschke multiplicity must be a positive integer, got {m}")
            if not abs(a) < 1:
                raise ValueError(f"Blaschke zero must lie in the open disc, got {a}")
            for entry in zeros:
                if abs(entry[0] - a) <= ZERO_TOL:
                    entry[1] += int(m)
                    break
            else:
                zeros.append([a, int(m)])
        sing: dict[float, float] = {}
        for th, mass in self.singular:
            if not mass > 0:
                raise ValueError(f"singular mass must be positive, got {mass}")
            th = canonical_angle(th)
            sing[th] = sing.get(th, 0.0) + float(mass)
        object.__setattr__(self, "blaschke",
                           tuple(sorted(((a, m) for a, m in zeros), key=lambda e: (e[0].real, e[0].imag))))
        object.__setattr__(self, "singular", tuple(sorted(sing.items())))

    # constructors ------------------------------------------------------------
    @classmethod
    def constant(cls, c: float = 1.0) -> "StructuredFunction":
        if c == 0:
            raise ValueError("the zero function has no inner-outer factorisation")
        return cls(outer=BoundaryModulus(math.log(abs(c))))

    @classmethod
    def monomial(cls, n: int) -> "StructuredFunction":
        return cls(blaschke=((0j, n),)) if n > 0 else cls()

    @classmethod
    def power(cls, theta: float, alpha: float = 1.0, c: float = 1.0) -> "StructuredFunction":
        """Outer function c (1 - e^{-i theta} z)^alpha, modulus |z - e^{i theta}|^alpha."""
        return cls(outer=BoundaryModulus(math.log(c), ((theta, alpha),)))

    @classmethod
    def singular_atom(cls, theta: float, mass: float = 1.0) -> "StructuredFunction":
        return cls(singular=((theta, mass),))

    @classmethod
    def blaschke_product(cls, *zeros) -> "StructuredFunction":
        return cls(blaschke=tuple((z, 1) for z in zeros))

    @classmethod
    def from_outer_samples(cls, log_modulus, n: int = DEFAULT_GRID) -> "StructuredFunction":
        """Outer function with a smooth bounded log-modulus sampled on n points."""
        g = np.asarray([log_modulus(t) for t in grid_nodes(n)], dtype=float)
        mean = float(np.mean(g))
        return cls(outer=BoundaryModulus(mean, (), tuple(g - mean)))

    @classmethod
    def from_polynomial(cls, coeffs, grid_size: int | None = None) -> "StructuredFunction":
        """Structured form of a polynomial (ascending coefficients).

        Equal to the polynomial up to a unimodular constant.  Roots off the
        circle enter the outer modulus through the grid term.
        """
        from .roots import cluster_roots

        coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
        if coeffs.size == 0:
            raise ValueError("zero polynomial")
        lead = coeffs[-1]
        roots = cluster_roots(coeffs)
        blaschke, powers, smooth = [], [], []
        log_c = math.log(abs(lead))
        worst = 0.0
        for r, m in roots:
            ar = abs(r)
            if abs(ar - 1.0) <= 1e-8:
                powers.append((cmath.phase(r), float(m)))
            elif ar < 1:
                blaschke.append((r, m))
                smooth.append((r, m, True))
                worst = max(worst, ar)
            else:
                log_c += m * math.log(ar)
                smooth.append((r, m, False))
                worst = max(worst, 1.0 / ar)
        grid = None
        if smooth:
            if grid_size is None:
                need = 2 * math.ceil(40.0 / max(-math.log10(worst), 1e-3)) if worst > 0 else 16
                grid_size = int(min(DEFAULT_GRID, max(16, 2 ** math.ceil(math.log2(need + 2)))))
            t = grid_nodes(grid_size)
            zeta = np.exp(1j * t)
            g = np.zeros(grid_size)
            for r, m, inside in smooth:
                g += m * (np.log(np.abs(1.0 - np.conj(r) * zeta)) if inside
                          else np.log(np.abs(1.0 - zeta / r)))
            g -= np.mean(g)
            grid = tuple(g)
        return cls(tuple(blaschke), (), BoundaryModulus(log_c, tuple(powers), grid))

    # structure ---------------------------------------------------------------
    @property
    def is_outer(self) -> bool:
        return not self.blaschke and not self.singular

    def inner_part(self) -> "StructuredFunction":
        return StructuredFunction(self.blaschke, self.singular, BoundaryModulus())

    def outer_part(self) -> "StructuredFunction":
        return StructuredFunction((), (), self.outer)

    def scaled(self, c: float) -> "StructuredFunction":
        """Multiply by |c| (phases are normalised away)."""
        o = self.outer
        return StructuredFunction(self.blaschke, self.singular,
                                  BoundaryModulus(o.log_constant + math.log(abs(c)), o.powers, o.grid))

    def shifted(self, k: int) -> "StructuredFunction":
        """Multiply by z^k."""
        if k == 0:
            return self
        return StructuredFunction(self.blaschke + ((0j, k),), self.singular, self.outer)

    def __mul__(self, other: "StructuredFunction") -> "StructuredFunction":
        a, b = self.outer, other.outer
        grid = None
        if a.grid is not None or b.grid is not None:
            n = max(len(a.grid or ()), len(b.grid or ()))
            if a.grid is not None and b.grid is not None and len(a.grid) != len(b.grid):
                n = 2 * n
            t = grid_nodes(n)
            grid = tuple(a.grid_log(t) + b.grid_log(t))
        return StructuredFunction(self.blaschke + other.blaschke, self.singular + other.singular,
                                  BoundaryModulus(a.log_constant + b.log_constant,
                                                  a.powers + b.powers, grid))

    # evaluation --------------------------------------------------------------
    def _singular_value(self, nodes: Nodes):
        out = np.ones(nodes.t.shape, dtype=complex)
        for th, m in self.singular:
            d = nodes.rel(th)
            h = nodes.h
            with np.errstate(all="ignore"):
                ratio = (1.0 + (1.0 - h) * np.exp(1j * d)) / one_minus(h, d)
                inside = np.exp(-m * ratio)
                on_circle = np.exp(-1j * m / np.tan(0.5 * d))
            out = out * np.where(h == 0, on_circle, inside)
        return out

    def _blaschke_value(self, z):
        out = np.ones(z.shape, dtype=complex)
        for a, m in self.blaschke:
            out = out * _blaschke_factor(a, z) ** m
        return out

    def _blaschke_derivative(self, z):
        total = np.zeros(z.shape, dtype=complex)
        for i, (a, m) in enumerate(self.blaschke):
            term = m * _blaschke_factor(a, z) ** (m - 1) * _blaschke_dfactor(a, z)
            for j, (b, k) in enumerate(self.blaschke):
                if j != i:
                    term = term * _blaschke_factor(b, z) ** k
            total = total + term
        return total

    def value(self, nodes: Nodes) -> np.ndarray:
        return self._blaschke_value(nodes.z) * self._singular_value(nodes) * self.outer.value(nodes)

    def derivative(self, nodes: Nodes) -> np.ndarray:
        """f' at interior nodes."""
        z = nodes.z
        rest = self._singular_value(nodes) * self.outer.value(nodes)
        logd = self.outer.log_derivative(nodes)
        for th, m in self.singular:
            logd = logd - 2.0 * m * np.exp(-1j * th) / one_minus(nodes.h, nodes.rel(th)) ** 2
        return self._blaschke_derivative(z) * rest + self._blaschke_value(z) * rest * logd

    def __call__(self, z):
        return evaluate(self, z)

    def log_modulus(self, nodes: Nodes) -> np.ndarray:
        """log|f| on the circle (inner factors are unimodular there)."""
        return self.outer.log_modulus(nodes)

    def radial_limit(self, p) -> complex:
        """f(p) = lim_{r -> 1} f(r p); 0 at boundary zeros, inf at poles of |f_o|."""
        th = angle_of(p)
        if any(q == th for q, _ in self.singular):
            return 0j
        om = self.outer.modulus_at(th)
        if om == 0:
            return 0j
        if math.isinf(om):
            return complex(math.inf, 0)
        return complex(self.value(point_nodes(th))[0])

    def outer_modulus_at(self, p) -> float:
        return self.outer.modulus_at(angle_of(p))

    @property
    def bandwidth(self) -> int:
        return self.outer.bandwidth

    @property
    def special_points(self) -> list[float]:
        return [q for q, _ in self.outer.powers] + [q for q, _ in self.singular]

    # serialization -----------------------------------------------------------
    def to_dict(self) -> dict:
        return {"blaschke": [{"re": a.real, "im": a.imag, "mult": m} for a, m in self.blaschke],
                "singular": [{"theta": th, "mass": m} for th, m in self.singular],
                "outer": self.outer.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "StructuredFunction":
        try:
            bl = tuple((complex(float(b["re"]), float(b.get("im", 0.0))), int(b.get("mult", 1)))
                       for b in d.get("blaschke", []))
            sg = tuple((float(s["theta"]), float(s["mass"])) for s in d.get("singular", []))
        except KeyError as exc:
            raise ValueError(f"function: missing field {exc}") from exc
        return cls(bl, sg, BoundaryModulus.from_dict(d.get("outer", {})))

    @classmethod
    def load(cls, path) -> "StructuredFunction":
        import json

        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class Arc:
    """Open arc from e^{ia} counterclockwise to e^{ib}."""

    a: float
    b: float

    def __post_init__(self):
        a, b = canonical_angle(angle_of(self.a)), canonical_angle(angle_of(self.b))
        if a == b:
            raise ValueError("arc endpoints must differ")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return float(np.mod(self.b - self.a, TWO_PI))

    def contains(self, t, closed: bool = True) -> np.ndarray:
        d = np.mod(np.asarray(t, dtype=float) - self.a, TWO_PI)
        if closed:
            return (d <= self.length + 1e-15) | (d >= TWO_PI - 1e-15)
        return (d > 0) & (d < self.length)


# module level operations -------------------------------------------------------

def evaluate(f: StructuredFunction, z):
    """f(z) for |z| < 1."""
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) >= 1):
        raise ValueError("evaluate needs |z| < 1")
    out = f.value(nodes_from_z(arr))
    return complex(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def derivative(f: StructuredFunction, z):
    arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(arr) >= 1):
        raise ValueError("derivative needs |z| < 1")
    out = f.derivative(nodes_from_z(arr))
    return complex(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def radial_limit_modulus(f: StructuredFunction, p) -> float:
    """|f(p)| along the radius; 0 at singular atoms, inf where |f_o| blows up."""
    th = angle_of(p)
    if any(q == th for q, _ in f.singular):
        return 0.0
    return f.outer.modulus_at(th)


def boundary_zero_set(f: StructuredFunction) -> tuple[UnitCirclePoint, ...]:
    pts = {q for q, a in f.outer.powers if a > 0} | {q for q, _ in f.singular}
    return tuple(UnitCirclePoint(q) for q in sorted(pts))


def lower_zero_set(f: StructuredFunction) -> ZeroSet:
    return ZeroSet(disk_zeros=tuple(f.blaschke), boundary_points=boundary_zero_set(f))


def _lattice(f: StructuredFunction, g: StructuredFunction, op, pick, n: int) -> StructuredFunction:
    if not (f.is_outer and g.is_outer):
        raise ValueError("wedge/vee are defined for outer functions only")
    if f == g:
        return f
    af = dict(f.outer.powers)
    ag = dict(g.outer.powers)
    points = sorted(set(af) | set(ag))
    alpha = {q: pick(af.get(q, 0.0), ag.get(q, 0.0)) for q in points}
    t = grid_nodes(n)
    nodes = Nodes(t=t, h=np.zeros(n), anchor=np.full(n, np.nan), offset=np.zeros(n))
    logs = {q: _log_chord(nodes.rel(q)) for q in points}

    def residual(fn, a):
        out = fn.outer.log_constant + (fn.outer.grid_log(t) if fn.outer.grid is not None else 0.0)
        for q in points:
            out = out + _scaled_log(a.get(q, 0.0) - alpha[q], logs[q])
        return out

    res = op(residual(f, af), residual(g, ag))
    mean = float(np.mean(res))
    grid = res - mean
    grid = None if np.max(np.abs(grid)) == 0 else tuple(grid)
    return StructuredFunction(outer=BoundaryModulus(mean, tuple(alpha.items()), grid))


def wedge(f: StructuredFunction, g: StructuredFunction, n: int = DEFAULT_GRID) -> StructuredFunction:
    """Outer function with boundary modulus min(|f|, |g|)."""
    return _lattice(f, g, np.minimum, max, n)


def vee(f: StructuredFunction, g: StructuredFunction, n: int = DEFAULT_GRID) -> StructuredFunction:
    """Outer function with boundary modulus max(|f|, |g|)."""
    return _lattice(f, g, np.maximum, min, n)


def fusion(f: StructuredFunction, arc: Arc, n: int = DEFAULT_GRID) -> StructuredFunction:
    """Outer f_V with modulus |(z - e^{ia})(e^{ib} - z)| * (|f| on the closed arc, 1 off it)."""
    if not f.is_outer:
        raise ValueError("fusion needs an outer function")
    if not f.outer.bounded:
        raise ValueError("fusion needs a bounded modulus (all power exponents >= 0)")
    inside = []
    for q, a in f.outer.powers:
        if q in (arc.a, arc.b):
            raise ValueError("power factor at an arc endpoint is not representable after fusion")
        if arc.contains(q, closed=False):
            inside.append((q, a))
    t = grid_nodes(n)
    nodes = Nodes(t=t, h=np.zeros(n), anchor=np.full(n, np.nan), offset=np.zeros(n))
    on = f.outer.log_constant + (f.outer.grid_log(t) if f.outer.grid is not None else 0.0)
    for q, a in f.outer.powers:
        coef = a - dict(inside).get(q, 0.0)
        on = on + _scaled_log(coef, _log_chord(nodes.rel(q)))
    off = np.zeros(n)
    for q, a in inside:
        off = off + _scaled_log(-a, _log_chord(nodes.rel(q)))
    res = np.where(arc.contains(t), on, off)
    mean = float(np.mean(res))
    grid = res - mean
    grid = None if np.max(np.abs(grid)) == 0 else tuple(grid)
    powers = tuple(inside) + ((arc.a, 1.0), (arc.b, 1.0))
    return StructuredFunction(outer=BoundaryModulus(mean, powers, grid))


def gcd_inner(f: StructuredFunction, g: StructuredFunction) -> StructuredFunction:
    """Greatest common inner divisor of the inner parts."""
    zeros = []
    for a, m in f.blaschke:
        for b, k in g.blaschke:
            if abs(a - b) <= ZERO_TOL:
                zeros.append((a, min(m, k)))
    sing = []
    gs = dict(g.singular)
    for th, m in f.singular:
        if th in gs:
            sing.append((th, min(m, gs[th])))
    return StructuredFunction(tuple(zeros), tuple(sing))


def divides_inner(d: StructuredFunction, f: StructuredFunction) -> bool:
    """Structural test that the inner part of d divides the inner part of f."""
    for a, m in d.blaschke:
        if sum(k for b, k in f.blaschke if abs(a - b) <= 1e-8) < m:
            return False
    fs = dict(f.singular)
    return all(fs.get(th, 0.0) >= m * (1 - 1e-12) for th, m in d.singular)


def h2_norm_sq(f: StructuredFunction, cfg: QuadratureConfig = DEFAULT_CONFIG) -> EnergyValue:
    """(1/2pi) int |f(e^{it})|^2 dt."""
    o = f.outer
    if not o.powers and o.grid is None:
        return EnergyValue(math.exp(2 * o.log_constant), 0.0, False)
    rule = boundary_rule([q for q, _ in o.powers], cfg, bandwidth=o.bandwidth)
    vals = np.exp(2.0 * o.log_modulus(rule.nodes))
    res = graded_sum(vals, rule, threshold=cfg.divergence_threshold)
    return EnergyValue.from_ring(res)


def boundary_values(f: StructuredFunction, t) -> np.ndarray:
    """f(e^{it}) on a set of angles (nodes carry no anchors)."""
    t = np.asarray(t, dtype=float)
    nodes = Nodes(t=t, h=np.zeros(t.shape), anchor=np.full(t.shape, np.nan), offset=np.zeros(t.shape))
    return f.value(nodes)


def taylor_coefficients(f, n_samples: int = 8192, tol: float = 1e-15) -> np.ndarray:
    """Taylor coefficients from samples on (or just inside) the circle.

    Polynomial-like inputs (objects with ``coefficients``) pass through
    exactly.  Trailing coefficients below ``tol`` relative are dropped.
    """
    if hasattr(f, "coefficients"):
        return np.asarray(f.coefficients, dtype=complex)
    m = int(n_samples)
    rho = 1.0 - 16.0 / m if f.singular else 1.0
    t = TWO_PI * (np.arange(m) + 0.5) / m
    h = 1.0 - rho
    nodes = Nodes(t=t, h=np.full(m, h), anchor=np.full(m, np.nan), offset=np.zeros(m))
    vals = f.value(nodes)
    c = np.fft.fft(vals) / m
    k = np.arange(m)
    c = c * np.exp(-1j * np.pi * k / m)
    keep = m // 4 if f.singular else m // 2
    c = c[:keep] / rho ** k[:keep]
    big = np.max(np.abs(c))
    idx = np.nonzero(np.abs(c) > tol * big)[0]
    return c[: idx[-1] + 1] if idx.size else c[:1]


def herglotz_outer(log_modulus, z, breakpoints=(), cfg: QuadratureConfig = DEFAULT_CONFIG,
                   bandwidth: int = 0) -> complex:
    """exp((1/2pi) int (e^{it} + z)/(e^{it} - z) log phi(t) dt) by quadrature.

    ``log_modulus`` maps boundary Nodes to log phi.  Independent of the
    closed forms used by BoundaryModulus.value.
    """
    z = complex(z)
    if abs(z) >= 1:
        raise ValueError("herglotz_outer needs |z| < 1")
    bps = list(breakpoints) + ([cmath.phase(z)] if z != 0 else [])
    rule = boundary_rule(bps, cfg, bandwidth=bandwidth)
    lam = np.exp(1j * rule.nodes.t)
    vals = (lam + z) / (lam - z) * log_modulus(rule.nodes)
    return complex(np.exp(np.sum(vals * rule.weights)))
