import functools
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from dmu.capacity import (Verdict, countable_set_capacity_zero, criterion_partial,
                          growth_exponent, point_capacity, positive_capacity_atoms)
from dmu.measures import AtomicMeasure, Family

angle = st.floats(0, 2 * math.pi)
atoms = st.lists(st.tuples(angle, st.floats(0.01, 5.0)), min_size=1, max_size=8)


@functools.lru_cache(maxsize=None)
def brute_rings(theta_star, angle_ratio, weight_ratio, count, levels):
    """Criterion integral per dyadic ring, with P summed atom by atom in 30-digit arithmetic."""
    mp.mp.dps = 30
    offs = [mp.mpf(angle_ratio) ** j for j in range(1, count + 1)]
    ws = [mp.mpf(weight_ratio) ** j for j in range(1, count + 1)]

    def integrand(h):
        r = 1 - h
        p = mp.fsum(w * (1 - r * r) / (1 - 2 * r * mp.cos(o) + r * r) for o, w in zip(offs, ws))
        return 1 / (h * p + h * h)

    return [float(mp.quad(integrand, [mp.mpf(2) ** (-k - 1), mp.mpf(2) ** (-k)]))
            for k in range(levels)]


def test_atom_point_positive():
    v = point_capacity(AtomicMeasure.dirac(1.0), 1.0)
    assert v.verdict is Verdict.POSITIVE and v.truncation_stable
    assert v.positive and math.isfinite(v.criterion_integral_estimate)


def test_far_point_zero():
    v = point_capacity(AtomicMeasure.dirac(0.0), math.pi)
    assert v.verdict is Verdict.ZERO and v.zero
    assert math.isinf(v.criterion_integral_estimate)


def test_zero_measure_raises():
    with pytest.raises(ValueError):
        point_capacity(AtomicMeasure(), 0.0)


def test_family_verdicts():
    zero = AtomicMeasure(families=(Family(0.0, 0.5, 1.0, 0.25, 30),))
    pos = AtomicMeasure(families=(Family(0.0, 0.25, 1.0, 0.5, 30),))
    crit = AtomicMeasure(families=(Family(0.0, 0.5, 1.0, 0.5, 30),))
    vz, vp, vc = point_capacity(zero, 0.0), point_capacity(pos, 0.0), point_capacity(crit, 0.0)
    assert vz.verdict is Verdict.ZERO and vz.growth_exponent_estimate == pytest.approx(-1, abs=0.1)
    assert vp.verdict is Verdict.POSITIVE and vp.growth_exponent_estimate == pytest.approx(0.5, abs=0.1)
    assert vc.verdict is Verdict.UNDETERMINED
    assert vz.truncation_stable and vp.truncation_stable


def test_ring_integrals_match_brute_force():
    for ar, wr in ((0.5, 0.25), (0.25, 0.5)):
        mu = AtomicMeasure(families=(Family(0.0, ar, 1.0, wr, 60),))
        ours = criterion_partial(mu, 0.0, 30)
        brute = brute_rings(0.0, ar, wr, 60, 30)
        assert np.allclose(ours, brute, rtol=1e-10)


def test_brute_force_growth_confirms_zero():
    # weights 0.25^j at offsets 0.5^j: rings grow, integral diverges
    rings = brute_rings(0.0, 0.5, 0.25, 60, 30)
    assert np.all(np.diff(rings[5:]) > 0)
    # weights 0.5^j at offsets 0.25^j: rings decay geometrically
    rings = brute_rings(0.0, 0.25, 0.5, 60, 30)
    assert rings[29] < 1e-3 * rings[5]


def test_growth_exponent_dirac():
    beta, _, n = growth_exponent(AtomicMeasure.dirac(0.0), 0.0, 40)
    assert beta == pytest.approx(1.0, abs=1e-6) and n == 20


def test_countable_sets():
    mu = AtomicMeasure(((0.0, 1.0), (2.0, 1.0)))
    assert countable_set_capacity_zero(mu, [1.0, 4.0]).all_zero is True
    assert countable_set_capacity_zero(mu, [1.0, 2.0]).all_zero is False
    assert countable_set_capacity_zero(mu, []).all_zero is True
    crit = AtomicMeasure(families=(Family(0.0, 0.5, 1.0, 0.5, 30),))
    assert countable_set_capacity_zero(crit, [0.0, 3.0]).all_zero is None
    with pytest.raises(ValueError):
        countable_set_capacity_zero(mu, [1.0, 1.0])


def test_positive_capacity_atoms():
    mu = AtomicMeasure(((3.0, 1.0),), (Family(0.0, 0.25, 1.0, 0.5, 10),
                                       Family(1.5, 0.5, 1.0, 0.25, 10)))
    pts = [q.theta for q in positive_capacity_atoms(mu)]
    assert 0.0 in pts and 1.5 not in pts and 3.0 in pts
    assert len(pts) == 22


def test_verdict_serialization():
    d = point_capacity(AtomicMeasure.dirac(0.0), 0.0).to_dict()
    assert d["verdict"] == "Positive" and set(d) == {"verdict", "integral_estimate", "exponent",
                                                     "stable", "reason"}


@given(atoms, st.integers(0, 7))
def test_atoms_positive(a, k):
    mu = AtomicMeasure(tuple(a))
    th = float(mu.expanded.theta[k % len(mu.expanded)])
    assert point_capacity(mu, th).verdict is Verdict.POSITIVE


@given(atoms, angle)
def test_far_points_zero(a, q):
    mu = AtomicMeasure(tuple(a))
    assume(mu.distance_to_support(q) >= 0.1)
    assert point_capacity(mu, q).verdict is Verdict.ZERO


@given(atoms, atoms, st.integers(0, 7))
def test_monotone_in_measure(a, b, k):
    mu1 = AtomicMeasure(tuple(a))
    mu2 = mu1 + AtomicMeasure(tuple(b))
    th = float(mu1.expanded.theta[k % len(mu1.expanded)])
    assert point_capacity(mu1, th).positive and point_capacity(mu2, th).positive


@given(st.floats(0.1, 0.4), st.floats(0.55, 0.9), angle)
def test_family_positive_monotone_and_stable(ar, wr, th):
    # angle ratio^1 < weight ratio: P grows like h^{-beta} with beta > 0
    beta = 1 - math.log(wr) / math.log(ar)
    assume(beta > 0.2)
    mu1 = AtomicMeasure(families=(Family(th, ar, 1.0, wr, 30),))
    v = point_capacity(mu1, th)
    assert v.verdict is Verdict.POSITIVE and v.truncation_stable
    mu2 = mu1 + AtomicMeasure(((th + 1.0, 2.0),))
    assert point_capacity(mu2, th).positive
