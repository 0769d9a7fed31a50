"""Descriptors (inner part, disk zeros, boundary set E) of invariant subspaces.

For a polynomial p the subspace [p] is described by its disk zeros and the
circle zeros of positive capacity; polynomial multiples of an outer function
vanishing exactly on E generate the same subspace.  For a singly generated
subspace [f] over a countable-support measure the descriptor is the inner
factor of f together with the positive-capacity support points where f
vanishes.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .capacity import Verdict, point_capacity, positive_capacity_atoms
from .cyclicity import AGREEMENT_FLOOR, AGREEMENT_TOL, extrapolate, relative_distances
from .functions import StructuredFunction, boundary_zero_set, divides_inner, radial_limit_modulus
from .measures import AtomicMeasure, UnitCirclePoint
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .roots import cluster_roots

ROOT_TOL = 1e-8
AMBIGUOUS_TOL = 1e-6


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with ascending coefficients."""

    coefficients: tuple

    def __post_init__(self):
        c = np.trim_zeros(np.asarray(self.coefficients, dtype=complex), "b")
        if c.size == 0:
            raise ValueError("zero polynomial")
        object.__setattr__(self, "coefficients", tuple(complex(v) for v in c))

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        try:
            vals = [complex(s.strip().replace(" ", "")) for s in text.split(",") if s.strip()]
        except ValueError as exc:
            raise ValueError(f"poly: cannot parse coefficient list {text!r}") from exc
        return cls(tuple(vals))

    @classmethod
    def from_roots(cls, roots, lead: complex = 1.0) -> "Polynomial":
        return cls(tuple(np.polynomial.polynomial.polyfromroots(roots) * lead))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, np.asarray(self.coefficients))

    def roots(self) -> list[tuple[complex, int]]:
        return cluster_roots(self.coefficients)

    def structured(self) -> StructuredFunction:
        return StructuredFunction.from_polynomial(self.coefficients)


@dataclass(frozen=True)
class InvariantDescriptor:
    inner_part: StructuredFunction
    disk_zeros: tuple
    boundary_set: tuple
    indeterminate: tuple = field(default=())
    ambiguous: tuple = field(default=())

    def to_dict(self) -> dict:
        return {"inner_part": self.inner_part.to_dict(),
                "disk_zeros": [{"re": a.real, "im": a.imag, "mult": m} for a, m in self.disk_zeros],
                "boundary_set": [p.theta for p in self.boundary_set],
                "indeterminate": [p.theta for p in self.indeterminate],
                "ambiguous_roots": [{"re": r.real, "im": r.imag, "mult": m}
                                    for r, m in self.ambiguous]}


def _capacity(mu: AtomicMeasure, theta: float) -> Verdict:
    if mu.is_zero:
        return Verdict.ZERO
    return point_capacity(mu, theta).verdict


def _snap(theta: float, mu: AtomicMeasure) -> float:
    """Move a numerically located circle root onto a support point within ROOT_TOL."""
    cands = list(mu.expanded.theta) + list(mu.accumulation_points)
    if cands:
        gap = np.abs(np.angle(np.exp(1j * (np.asarray(cands) - theta))))
        k = int(np.argmin(gap))
        if gap[k] <= ROOT_TOL:
            return float(cands[k])
    return theta


def _vanishes_at(g: StructuredFunction, e: UnitCirclePoint) -> bool:
    if radial_limit_modulus(g, e) == 0:
        return True
    return any(abs(cmath.phase(cmath.exp(1j * (q.theta - e.theta)))) <= ROOT_TOL
               for q in boundary_zero_set(g))


def polynomial_descriptor(p: Polynomial, mu: AtomicMeasure) -> InvariantDescriptor:
    """(Lambda_p, E) with E the circle roots of positive capacity."""
    disk, boundary, undecided, ambiguous = [], [], [], []
    for r, m in p.roots():
        gap = abs(r) - 1.0
        if abs(gap) > ROOT_TOL and abs(gap) <= AMBIGUOUS_TOL:
            ambiguous.append((r, m))
        if gap < -ROOT_TOL:
            disk.append((r, m))
        elif abs(gap) <= ROOT_TOL:
            q = UnitCirclePoint(_snap(cmath.phase(r), mu))
            v = _capacity(mu, q.theta)
            if v is Verdict.POSITIVE:
                boundary.append(q)
            elif v is Verdict.UNDETERMINED:
                undecided.append(q)
    inner = StructuredFunction(blaschke=tuple(disk))
    return InvariantDescriptor(inner, tuple(inner.blaschke), tuple(sorted(set(boundary), key=float)),
                               tuple(undecided), tuple(ambiguous))


def membership_predicted(g: StructuredFunction, d: InvariantDescriptor, mu: AtomicMeasure) -> bool:
    """Structural test of g in M_mu(Lambda, E) (resp. Theta H^2 cap M_mu(E))."""
    if not divides_inner(d.inner_part, g):
        return False
    return all(_vanishes_at(g, e) for e in d.boundary_set)


def membership_numerical(g, generator, mu: AtomicMeasure, n_max: int,
                         cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[float]:
    """Relative distances dist_mu(g, span{z^k generator}) / ||g||_mu, n = 0..n_max."""
    return relative_distances(g, generator, mu, n_max)[0]


@dataclass(frozen=True)
class MembershipReport:
    predicted: bool
    distances: tuple
    extrapolated_limit: float
    numerical: bool | None
    agree: bool

    def to_dict(self) -> dict:
        return {"predicted": self.predicted, "distances": list(self.distances),
                "extrapolated_limit": self.extrapolated_limit,
                "numerical_member": self.numerical, "agree": self.agree}


def membership_report(g: StructuredFunction, generator, d: InvariantDescriptor,
                      mu: AtomicMeasure, n_max: int,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> MembershipReport:
    """Structural prediction next to the extrapolated numerical distance."""
    pred = membership_predicted(g, d, mu)
    dist = membership_numerical(g, generator, mu, n_max, cfg)
    limit, _ = extrapolate(dist)
    num = True if limit < AGREEMENT_FLOOR else False if limit > AGREEMENT_TOL else None
    agree = (limit <= AGREEMENT_TOL) if pred else (limit >= AGREEMENT_FLOOR)
    return MembershipReport(pred, tuple(dist), limit, num, agree)


def th2_descriptor(f: StructuredFunction, mu: AtomicMeasure) -> InvariantDescriptor:
    """Descriptor of [f]: inner factor of f and positive-capacity support zeros."""
    support = positive_capacity_atoms(mu) if not mu.is_zero else []
    e = tuple(q for q in support if radial_limit_modulus(f, q) == 0)
    inner = f.inner_part()
    return InvariantDescriptor(inner, inner.blaschke, e)
