"""Positive finite atomic measures on the unit circle."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .quadrature import TWO_PI, canonical_angle, poisson_kernel, wrap

MERGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class UnitCirclePoint:
    """A point e^{i theta} of the circle, theta kept in [0, 2pi)."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(self.theta))

    def __eq__(self, other):
        if isinstance(other, UnitCirclePoint):
            return self.theta == other.theta
        return NotImplemented

    def __hash__(self):
        return hash(self.theta)

    def __float__(self):
        return self.theta

    @property
    def z(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))


def angle_of(p) -> float:
    """Canonical angle of a UnitCirclePoint or a bare float."""
    if isinstance(p, UnitCirclePoint):
        return p.theta
    return canonical_angle(float(p))


@dataclass(frozen=True)
class Family:
    """Atoms at ``theta_star + angle_ratio**j`` with weight
    ``base_weight * weight_ratio**j`` for j = 1..count."""

    theta_star: float
    angle_ratio: float
    base_weight: float
    weight_ratio: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "theta_star", canonical_angle(self.theta_star))
        if not 0 < self.angle_ratio < 1:
            raise ValueError("family angle_ratio must lie in (0, 1)")
        if not 0 < self.weight_ratio < 1:
            raise ValueError("family weight_ratio must lie in (0, 1)")
        if not self.base_weight > 0:
            raise ValueError("family base_weight must be positive")
        if int(self.count) != self.count or self.count < 1:
            raise ValueError("family count must be a positive integer")
        object.__setattr__(self, "count", int(self.count))

    def doubled(self) -> "Family":
        return Family(self.theta_star, self.angle_ratio, self.base_weight,
                      self.weight_ratio, 2 * self.count)


@dataclass(frozen=True)
class ExpandedAtoms:
    """Atom positions as (anchor, offset) pairs plus weights.

    Plain atoms have offset 0; family atoms are anchored at their
    accumulation point so that deep truncations keep exact geometry.
    """

    anchor: np.ndarray
    offset: np.ndarray
    weight: np.ndarray

    @property
    def theta(self) -> np.ndarray:
        return np.mod(self.anchor + self.offset, TWO_PI)

    def rel(self, q: float) -> np.ndarray:
        """Angles of the atoms measured from the circle point ``q``."""
        return np.where(self.anchor == q, self.offset, wrap(self.anchor + self.offset - q))

    def __len__(self):
        return self.weight.size


def _merge(entries):
    """Merge coinciding atoms by adding weights.

    Plain atoms coincide within MERGE_TOL; atoms sharing an accumulation
    anchor coincide within MERGE_TOL relative to their offset.
    """
    merged: list[list[float]] = []
    for anchor, off, w in sorted(entries, key=lambda e: (canonical_angle(e[0] + e[1]), e[0])):
        for m in merged:
            if m[0] == anchor and (off != 0 or m[1] != 0):
                tol = MERGE_TOL * max(abs(off), abs(m[1]))
                dist = abs(off - m[1])
            else:
                tol = MERGE_TOL
                dist = abs(float(wrap((m[0] + m[1]) - (anchor + off))))
            if dist <= tol:
                m[2] += w
                break
        else:
            merged.append([anchor, off, w])
    return merged


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite list of circle atoms plus truncated accumulating families."""

    atoms: tuple = ()
    families: tuple = field(default=())

    def __post_init__(self):
        atoms = tuple((canonical_angle(float(th)), float(w)) for th, w in self.atoms)
        for _, w in atoms:
            if not (w > 0 and math.isfinite(w)):
                raise ValueError(f"atom weight must be positive and finite, got {w}")
        fams = tuple(f if isinstance(f, Family) else Family(**f) for f in self.families)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "families", fams)

    # construction helpers ---------------------------------------------------
    @classmethod
    def dirac(cls, theta: float = 0.0, weight: float = 1.0) -> "AtomicMeasure":
        return cls(atoms=((theta, weight),))

    def __add__(self, other: "AtomicMeasure") -> "AtomicMeasure":
        return AtomicMeasure(self.atoms + other.atoms, self.families + other.families)

    def scaled(self, c: float) -> "AtomicMeasure":
        return AtomicMeasure(tuple((t, c * w) for t, w in self.atoms),
                             tuple(Family(f.theta_star, f.angle_ratio, c * f.base_weight,
                                          f.weight_ratio, f.count) for f in self.families))

    def with_doubled_truncation(self) -> "AtomicMeasure":
        return AtomicMeasure(self.atoms, tuple(f.doubled() for f in self.families))

    # geometry -----------------------------------------------------------------
    @cached_property
    def expanded(self) -> ExpandedAtoms:
        entries = [(th, 0.0, w) for th, w in self.atoms]
        for f in self.families:
            j = np.arange(1, f.count + 1)
            offs = f.angle_ratio ** j
            ws = f.base_weight * f.weight_ratio ** j
            entries.extend((f.theta_star, float(o), float(w)) for o, w in zip(offs, ws))
        merged = _merge(entries)
        arr = np.array(merged, dtype=float).reshape(-1, 3)
        return ExpandedAtoms(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())

    @property
    def accumulation_points(self) -> tuple[float, ...]:
        return tuple(dict.fromkeys(f.theta_star for f in self.families))

    @property
    def is_zero(self) -> bool:
        return len(self.expanded) == 0

    def total_mass(self) -> float:
        return float(math.fsum(self.expanded.weight))

    def poisson_integral(self, z) -> np.ndarray | float:
        """P_mu(z) = sum_j w_j (1 - |z|^2) / |1 - conj(zeta_j) z|^2."""
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1):
            raise ValueError("poisson_integral needs |z| < 1")
        h = 1.0 - np.abs(z)
        t = np.angle(z)
        out = self.poisson_polar(h, t)
        return float(out) if out.ndim == 0 else out

    def poisson_polar(self, h, t, anchor=None, offset=None) -> np.ndarray:
        """P_mu at (1 - h) e^{it}; ``anchor``/``offset`` as in quadrature.Nodes."""
        h = np.asarray(h, dtype=float)
        t = np.asarray(t, dtype=float)
        ex = self.expanded
        out = np.zeros(np.broadcast(h, t).shape)
        for th, w in zip(ex.theta, ex.weight):
            d = wrap(t - th)
            if anchor is not None:
                d = np.where(anchor == th, offset, d)
            out = out + w * poisson_kernel(h, d)
        return out

    def radial_poisson(self, p, h) -> np.ndarray:
        """P_mu((1 - h) p) with exact atom geometry relative to ``p``."""
        q = angle_of(p)
        ex = self.expanded
        d = ex.rel(q)
        h = np.asarray(h, dtype=float)[..., None]
        return np.sum(ex.weight * poisson_kernel(h, d), axis=-1)

    def distance_to_support(self, p) -> float:
        """Chordal distance from ``p`` to the closed support."""
        if self.is_zero:
            raise ValueError("distance_to_support of the zero measure")
        q = angle_of(p)
        d = np.abs(self.expanded.rel(q))
        for s in self.accumulation_points:
            d = np.append(d, abs(float(wrap(s - q))))
        return float(np.min(2.0 * np.sin(0.5 * np.minimum(d, math.pi))))

    def atom_at(self, p) -> bool:
        q = angle_of(p)
        ex = self.expanded
        # family atoms anchored at q sit on q only with zero offset
        hit = np.where(ex.anchor == q, ex.offset == 0, np.abs(ex.rel(q)) <= MERGE_TOL)
        return bool(np.any(hit))

    # serialization ------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "atoms": [{"theta": t, "weight": w} for t, w in self.atoms],
            "families": [{"theta_star": f.theta_star, "angle_ratio": f.angle_ratio,
                          "base_weight": f.base_weight, "weight_ratio": f.weight_ratio,
                          "count": f.count} for f in self.families],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AtomicMeasure":
        try:
            atoms = tuple((float(a["theta"]), float(a["weight"])) for a in data.get("atoms", []))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"measure atoms: missing or malformed field {exc}") from exc
        fams = []
        for i, f in enumerate(data.get("families", [])):
            try:
                fams.append(Family(float(f["theta_star"]), float(f["angle_ratio"]),
                                   float(f["base_weight"]), float(f["weight_ratio"]),
                                   f["count"]))
            except KeyError as exc:
                raise ValueError(f"measure families[{i}]: missing field {exc}") from exc
        return cls(atoms, tuple(fams))

    @classmethod
    def load(cls, path) -> "AtomicMeasure":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def total_mass(mu: AtomicMeasure) -> float:
    return mu.total_mass()


def poisson_integral(mu: AtomicMeasure, z):
    return mu.poisson_integral(z)


def distance_to_support(mu: AtomicMeasure, p) -> float:
    return mu.distance_to_support(p)
