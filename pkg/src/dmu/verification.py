"""Built-in verification batteries.

Each suite returns a :class:`SuiteResult` whose ``cases`` list records the
measured quantity next to its tolerance.  The batteries are deterministic
(fixed seeds, ordered evaluation) so reports are byte-reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .capacity import point_capacity
from .cyclicity import cyclicity_report
from .dirichlet import (dirichlet_energy, dirichlet_energy_area, local_dirichlet_direct,
                        local_dirichlet_rs, mu_norm_sq)
from .functions import BoundaryModulus, StructuredFunction, vee, wedge
from .invariant import Polynomial, membership_report, polynomial_descriptor
from .measures import AtomicMeasure, Family
from .quadrature import DEFAULT_CONFIG, TWO_PI, QuadratureConfig

S = StructuredFunction


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "summary": self.summary,
                "cases": self.cases}


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt])


def random_measure(rng: np.random.Generator, max_atoms: int = 10) -> AtomicMeasure:
    n = int(rng.integers(1, max_atoms + 1))
    th = rng.uniform(0, TWO_PI, n)
    w = rng.uniform(0.1, 2.0, n)
    return AtomicMeasure(tuple(zip(th.tolist(), w.tolist())))


def _smooth_outer(rng, modes: int = 3) -> StructuredFunction:
    a = rng.normal(0, 0.3, modes)
    b = rng.normal(0, 0.3, modes)
    ph = rng.uniform(0, TWO_PI)
    n = 64

    def logmod(t):
        k = np.arange(1, modes + 1)
        return float(np.sum(a * np.cos(k * (t - ph)) + b * np.sin(k * t)) / 1.0)

    return S.from_outer_samples(logmod, n)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# monomial norms -----------------------------------------------------------------

def suite_monomial(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> SuiteResult:
    """||z^n||_mu^2 = 1 + n mu(T) for n <= 50 on 5 measures."""
    rng = _rng(seed, 1)
    cases, worst = [], 0.0
    for i in range(5):
        mu = random_measure(rng)
        mass = mu.total_mass()
        errs = [_rel(mu_norm_sq(S.monomial(n), mu, cfg).value, 1.0 + n * mass) for n in range(51)]
        worst = max(worst, max(errs))
        cases.append({"measure": i, "atoms": len(mu.atoms), "mass": mass, "max_rel_error": max(errs)})
    return SuiteResult("monomial", worst <= 1e-8, cases, {"max_rel_error": worst, "tol": 1e-8})


# decomposition vs direct local integral -----------------------------------------

def rs_battery(seed: int = 0) -> list[tuple[str, StructuredFunction, float]]:
    """30 (label, f, point) cases: outer, Blaschke-bearing and mixed, at non-singular points."""
    rng = _rng(seed, 2)
    out = []
    outer = [
        ("1-z", S.power(0.0)),
        ("(1-z)^0.5", S.power(0.0, 0.5)),
        ("|z+1|^-0.3", S.power(math.pi, -0.3)),
        ("1+z/2", S.from_polynomial([1, 0.5])),
        ("poly2", S.from_polynomial([2, 0.3 - 0.4j, 0.5])),
        ("(z-i)^2 (z+3)", S.from_polynomial(np.polynomial.polynomial.polyfromroots([1j, 1j, -3]))),
        ("smooth-a", _smooth_outer(rng)),
        ("smooth-b", _smooth_outer(rng, 5)),
        ("powers", S(outer=BoundaryModulus(0.2, ((1.0, 0.7), (4.0, 1.5))))),
        ("smooth*power", _smooth_outer(rng) * S.power(2.0, 0.4)),
    ]
    blaschke = [
        ("z", S.monomial(1)),
        ("z^4", S.monomial(4)),
        ("B(0.5)", S.blaschke_product(0.5)),
        ("B(0.9i, -0.3)", S.blaschke_product(0.9j, -0.3)),
        ("B(0.7)^2 (1-z)", S(blaschke=((0.7, 2),)) * S.power(0.0)),
        ("z (1+z/2)", S.monomial(1) * S.from_polynomial([1, 0.5])),
        ("B(0.6e^{i2}) smooth", S.blaschke_product(0.6 * np.exp(2j)) * _smooth_outer(rng)),
        ("z^2 - 0.25", S.from_polynomial([-0.25, 0, 1])),
        ("B(0.95)", S.blaschke_product(0.95)),
        ("B(0.2-0.5i) |z-e^{i3}|", S.blaschke_product(0.2 - 0.5j) * S.power(3.0)),
    ]
    mixed = [
        ("S(2)", S.singular_atom(2.0)),
        ("S(1, 0.5)", S.singular_atom(1.0, 0.5)),
        ("S(2) (1+z)", S.singular_atom(2.0, 0.7) * S.from_polynomial([1, 1])),
        ("S(4) B(0.5)", S.singular_atom(4.0) * S.blaschke_product(0.5)),
        ("S(5, 2) (1-z)", S.singular_atom(5.0, 2.0) * S.power(0.0)),
        ("S(3) smooth", S.singular_atom(3.0, 0.3) * _smooth_outer(rng)),
        ("S(1) S(4)", S(singular=((1.0, 0.4), (4.0, 0.8)))),
        ("S(2) z (1-z)^0.5", S.singular_atom(2.0) * S.monomial(1) * S.power(0.0, 0.5)),
        ("S(3) |z-1|^2", S.singular_atom(3.0) * S.power(0.0, 2.0)),
        ("S(6, 0.1) B(0.8i)", S.singular_atom(6.0, 0.1) * S.blaschke_product(0.8j)),
    ]
    pts = rng.uniform(0, TWO_PI, 30)
    for (label, f), p in zip(outer + blaschke + mixed, pts):
        special = f.special_points
        while any(abs(math.remainder(p - q, TWO_PI)) < 0.05 for q in special):
            p += 0.1
        out.append((label, f, float(p)))
    return out


def suite_rs(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> SuiteResult:
    cases, worst = [], 0.0
    for label, f, p in rs_battery(seed):
        a = local_dirichlet_rs(f, p, cfg)
        b = local_dirichlet_direct(f, p, cfg)
        if a.diverged or b.diverged:
            err = math.inf
        else:
            err = _rel(a.value, b.value) if b.value > 0 else abs(a.value)
        worst = max(worst, err)
        cases.append({"function": label, "point": p, "rs": a.value, "direct": b.value,
                      "error": err})
    return SuiteResult("rs_vs_direct", worst <= 1e-6, cases, {"max_error": worst, "tol": 1e-6})


# local sum vs area energy -------------------------------------------------------

def energy_battery(seed: int = 0):
    rng = _rng(seed, 3)
    fam = AtomicMeasure(((2.0, 0.5),), (Family(1.0, 0.5, 1.0, 0.5, 10),))
    measures = [AtomicMeasure.dirac(0.0), random_measure(rng, 4), fam]
    funcs = [("z^3", S.monomial(3)), ("1-z", S.power(0.0)),
             ("poly", S.from_polynomial([1, 0.3, 0.2])),
             ("B(0.5i)", S.blaschke_product(0.5j)),
             ("S(2)", S.singular_atom(2.5, 0.5)),
             ("|z+1|^0.5", S.power(math.pi, 0.5)),
             ("smooth", _smooth_outer(rng))]
    return [(fl, f, i, mu) for i, mu in enumerate(measures) for fl, f in funcs]


def suite_area(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> SuiteResult:
    cases, worst = [], 0.0
    for label, f, i, mu in energy_battery(seed):
        a = dirichlet_energy(f, mu, cfg)
        b = dirichlet_energy_area(f, mu, cfg)
        if a.diverged or b.diverged:
            err = 0.0 if a.diverged and b.diverged else math.inf
        else:
            err = _rel(b.value, a.value) if a.value > 0 else abs(b.value)
        worst = max(worst, err)
        cases.append({"function": label, "measure": i, "local_sum": a.value, "area": b.value,
                      "rel_error": err})
    return SuiteResult("energy_area", worst <= 1e-4, cases, {"max_rel_error": worst, "tol": 1e-4})


# capacity verdicts --------------------------------------------------------------

def suite_capacity(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> SuiteResult:
    rng = _rng(seed, 4)
    cases, ok = [], True
    measures = [random_measure(rng, 6) for _ in range(5)]
    measures.append(AtomicMeasure(((3.0, 1.0),), (Family(0.5, 0.25, 1.0, 0.5, 30),)))
    atom_cases, far_cases = [], []
    for mu in measures:
        th = mu.expanded.theta
        atom_cases.extend((mu, float(t)) for t in th[:2])
        found = 0
        for _ in range(400):
            q = float(rng.uniform(0, TWO_PI))
            if mu.distance_to_support(q) >= 0.1:
                far_cases.append((mu, q))
                found += 1
                if found == 2:
                    break
    atom_cases, far_cases = atom_cases[:10], far_cases[:10]
    for mu, p in atom_cases:
        v = point_capacity(mu, p).verdict.value
        ok &= v == "Positive"
        cases.append({"kind": "atom", "point": p, "verdict": v, "expected": "Positive"})
    for mu, p in far_cases:
        v = point_capacity(mu, p).verdict.value
        ok &= v == "Zero"
        cases.append({"kind": "far", "point": p, "verdict": v, "expected": "Zero"})
    # nested pairs mu1 <= mu2 at points where mu1 gives Positive
    mono = []
    for k in range(10):
        if k < 7:
            mu1 = random_measure(rng, 5)
            p = float(mu1.expanded.theta[0])
        else:
            mu1 = AtomicMeasure(families=(Family(1.0 + k, 0.25, 1.0, 0.5, 30),))
            p = 1.0 + k
        extra = random_measure(rng, 3)
        mu2 = mu1 + extra + AtomicMeasure(families=(Family(p, 0.5, 0.3, 0.3, 20),))
        v1 = point_capacity(mu1, p).verdict.value
        v2 = point_capacity(mu2, p).verdict.value
        good = v1 == "Positive" and v2 == "Positive"
        ok &= good
        mono.append({"pair": k, "point": p, "verdict_small": v1, "verdict_large": v2})
    cases.extend({"kind": "monotone", **m} for m in mono)
    return SuiteResult("capacity", bool(ok), cases,
                       {"verdict_cases": len(atom_cases) + len(far_cases), "monotone_pairs": len(mono)})


# cyclicity quartet --------------------------------------------------------------

def suite_cyclicity(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG, n_max: int = 100
                    ) -> SuiteResult:
    mu = AtomicMeasure.dirac(0.0)
    quartet = [("1", S.constant(1.0)), ("z", S.monomial(1)),
               ("1-z", S.from_polynomial([1, -1])), ("1+z", S.from_polynomial([1, 1]))]
    cases, ok = [], True
    for label, f in quartet:
        r = cyclicity_report(f, mu, n_max, cfg)
        d = np.asarray(r.distances)
        mono = float(np.max(np.diff(d))) if d.size > 1 else 0.0
        if label == "1":
            good = float(np.max(np.abs(d))) <= 1e-8
        elif label == "z":
            good = float(np.max(np.abs(d - 1.0))) <= 1e-8
        elif label == "1-z":
            good = r.extrapolated_limit >= 0.02 and r.predicted_cyclic is False
        else:
            good = mono <= 1e-9 and r.extrapolated_limit <= 0.1 and r.predicted_cyclic is True
        good = good and r.numerics_agree and len(d) == n_max + 1
        ok &= good
        cases.append({"function": label, "d_0": float(d[0]), "d_last": float(d[-1]),
                      "extrapolated_limit": r.extrapolated_limit, "max_increase": mono,
                      "predicted_cyclic": r.predicted_cyclic, "numerics_agree": r.numerics_agree,
                      "passed": bool(good)})
    return SuiteResult("cyclicity_quartet", bool(ok), cases, {"n_max": n_max})


# polynomial subspace membership -------------------------------------------------

def membership_battery():
    d0 = AtomicMeasure.dirac(0.0)
    two = AtomicMeasure(((0.0, 1.0), (math.pi, 0.5)))
    roots = Polynomial.from_roots
    return [
        ("(z-1)^2 in [z-1]", Polynomial((1, -2, 1)), Polynomial((-1, 1)), d0),
        ("1 in [z-1]", Polynomial((1,)), Polynomial((-1, 1)), d0),
        ("1+z in [z-1]", Polynomial((1, 1)), Polynomial((-1, 1)), d0),
        ("z^2 in [z^2(z-2)]", Polynomial((0, 0, 1)), Polynomial((0, 0, -2, 1)), d0),
        ("z in [z^2(z-2)]", Polynomial((0, 1)), Polynomial((0, 0, -2, 1)), d0),
        ("z-1 in [(z-1)(z+1)]", Polynomial((-1, 1)), Polynomial((-1, 0, 1)), d0),
        ("z-1/2 in [(z-1/2)(z-1)]", Polynomial((-0.5, 1)), Polynomial((0.5, -1.5, 1)), d0),
        ("z-1 in [(z-1)^3]", Polynomial((-1, 1)), Polynomial((-1, 3, -3, 1)), d0),
        ("z-1 in [(z-1)(z+1)], two atoms", Polynomial((-1, 1)), Polynomial((-1, 0, 1)), two),
        ("(z-1)(z+1)(z-0.3) in [(z-1)(z+1)], two atoms", roots([1, -1, 0.3]),
         Polynomial((-1, 0, 1)), two),
    ]


def suite_membership(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG, n_max: int = 100
                    ) -> SuiteResult:
    cases, ok = [], True
    for label, g, p, mu in membership_battery():
        d = polynomial_descriptor(p, mu)
        r = membership_report(g.structured(), p, d, mu, n_max, cfg)
        ok &= r.agree
        cases.append({"case": label, "boundary_set": [q.theta for q in d.boundary_set],
                      "predicted": r.predicted, "extrapolated_limit": r.extrapolated_limit,
                      "agree": r.agree})
    return SuiteResult("membership", bool(ok), cases,
                       {"agreements": sum(c["agree"] for c in cases), "total": len(cases)})


# lattice inequalities -----------------------------------------------------------

def random_outer(rng) -> StructuredFunction:
    kind = int(rng.integers(0, 3))
    if kind == 0:
        roots = rng.uniform(1.2, 3.0, 2) * np.exp(1j * rng.uniform(0, TWO_PI, 2))
        return S.from_polynomial(np.polynomial.polynomial.polyfromroots(roots))
    if kind == 1:
        return S(outer=BoundaryModulus(float(rng.normal(0, 0.3)),
                                       ((float(rng.uniform(0, TWO_PI)), float(rng.uniform(0.2, 1.5))),)))
    return _smooth_outer(rng) * S.power(float(rng.uniform(0, TWO_PI)), float(rng.uniform(0.5, 1.0)))


def suite_lattice(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> SuiteResult:
    rng = _rng(seed, 7)
    cases, ok = [], True
    for k in range(10):
        f, g = random_outer(rng), random_outer(rng)
        mu = random_measure(rng, 3)
        nf, ng = mu_norm_sq(f, mu, cfg).value, mu_norm_sq(g, mu, cfg).value
        nw = mu_norm_sq(wedge(f, g, 1024), mu, cfg).value
        nv = mu_norm_sq(vee(f, g, 1024), mu, cfg).value
        good = nw <= nf + ng and nv <= nf + ng
        ok &= good
        cases.append({"pair": k, "norm_f": nf, "norm_g": ng, "norm_wedge": nw, "norm_vee": nv,
                      "passed": bool(good)})
    return SuiteResult("lattice", bool(ok), cases, {"pairs": 10})


# additivity in the measure ------------------------------------------------------

def suite_additivity(seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> SuiteResult:
    rng = _rng(seed, 8)
    funcs = [f for _, f, _ in rs_battery(seed)][::3]
    cases, worst = [], 0.0
    for k, f in enumerate(funcs[:10]):
        mu1, mu2 = random_measure(rng, 4), random_measure(rng, 4)
        if k % 3 == 0:
            mu2 = mu2 + mu1.scaled(0.5)  # shared atoms merge
        a = dirichlet_energy(f, mu1 + mu2, cfg).value
        b = dirichlet_energy(f, mu1, cfg).value + dirichlet_energy(f, mu2, cfg).value
        err = abs(a - b) / max(1.0, abs(b))
        worst = max(worst, err)
        cases.append({"case": k, "joint": a, "split": b, "error": err})
    return SuiteResult("additivity", worst <= 1e-10, cases, {"max_error": worst, "tol": 1e-10})


SUITES = {
    "monomial": suite_monomial,
    "rs": suite_rs,
    "area": suite_area,
    "capacity": suite_capacity,
    "cyclicity": suite_cyclicity,
    "membership": suite_membership,
    "lattice": suite_lattice,
    "additivity": suite_additivity,
}


def run_suites(names, seed: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[SuiteResult]:
    if "all" in names:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"suite: unknown suite name(s) {unknown}")
    return [SUITES[n](seed=seed, cfg=cfg) for n in names]
