import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from dmu.measures import (AtomicMeasure, Family, UnitCirclePoint, distance_to_support,
                          poisson_integral, total_mass)

angles = st.floats(0, 2 * math.pi, allow_nan=False, exclude_max=True)
weights = st.floats(0.01, 10.0)
measures = st.lists(st.tuples(angles, weights), min_size=1, max_size=8).map(
    lambda a: AtomicMeasure(tuple(a)))
disc = st.tuples(st.floats(0, 0.95), angles).map(lambda rt: rt[0] * complex(math.cos(rt[1]), math.sin(rt[1])))


def poisson_mp(atoms, z, dps=50):
    """Extended-precision kernel summation."""
    with mpmath.workdps(dps):
        z = mpmath.mpc(z)
        return sum(mpmath.mpf(w) * (1 - abs(z) ** 2) / abs(1 - mpmath.expj(-th) * z) ** 2
                   for th, w in atoms)


def test_total_mass_examples(delta0, two_atoms):
    assert total_mass(delta0) == 1.0
    assert total_mass(two_atoms) == 3.0
    fam = AtomicMeasure(families=(Family(0.0, 0.5, 1.0, 0.5, 3),))
    assert total_mass(fam) == pytest.approx(0.875, abs=1e-15)


def test_poisson_examples(delta0):
    assert poisson_integral(delta0, 0) == pytest.approx(1.0, abs=1e-15)
    assert poisson_integral(delta0, 0.5) == pytest.approx(3.0, rel=1e-15)


def test_poisson_two_atoms_against_extended_precision():
    atoms = ((0.0, 1.0), (math.pi, 1.0))
    frozen = 362.0 / 19.0  # 0.19/0.01 + 0.19/3.61, from the oracle below
    assert float(poisson_mp(atoms, 0.9)) == pytest.approx(frozen, rel=1e-15)
    assert poisson_integral(AtomicMeasure(atoms), 0.9) == pytest.approx(frozen, rel=1e-13)


def test_poisson_domain_error(delta0):
    with pytest.raises(ValueError):
        poisson_integral(delta0, 1.0)
    with pytest.raises(ValueError):
        poisson_integral(delta0, 2j)


def test_distance_examples(delta0):
    assert distance_to_support(delta0, 0.0) == 0.0
    assert distance_to_support(delta0, math.pi) == pytest.approx(2.0)
    fam = AtomicMeasure(families=(Family(0.0, 0.5, 1.0, 0.5, 10),))
    assert distance_to_support(fam, 0.0) == 0.0
    with pytest.raises(ValueError):
        distance_to_support(AtomicMeasure(), 0.0)


def test_point_canonicalization():
    assert UnitCirclePoint(2 * math.pi + 1.0) == UnitCirclePoint(1.0)
    assert UnitCirclePoint(-math.pi).theta == pytest.approx(math.pi)
    assert UnitCirclePoint(0.5) != UnitCirclePoint(0.5 + 1e-9)


def test_merge_of_coinciding_atoms():
    mu = AtomicMeasure(((0.0, 1.0), (2 * math.pi, 2.0), (1.0, 1.0), (1.0 + 1e-13, 1.0)))
    ex = mu.expanded
    assert len(ex) == 2
    assert sorted(ex.weight.tolist()) == [2.0, 3.0]


def test_deep_family_atoms_stay_distinct():
    fam = AtomicMeasure(families=(Family(1.0, 0.25, 1.0, 0.5, 40),))
    assert len(fam.expanded) == 40
    assert not fam.atom_at(1.0)
    assert fam.atom_at(1.0 + 0.25 ** 3)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        AtomicMeasure(((0.0, -1.0),))
    with pytest.raises(ValueError):
        Family(0.0, 1.5, 1.0, 0.5, 3)
    with pytest.raises(ValueError):
        Family(0.0, 0.5, 1.0, 0.5, 0)
    with pytest.raises(ValueError, match="theta_star"):
        AtomicMeasure.from_dict({"families": [{"angle_ratio": 0.5}]})


def test_json_round_trip(tmp_path):
    mu = AtomicMeasure(((0.1, 1.0), (3.0, 0.25)), (Family(2.0, 0.5, 1.0, 0.3, 7),))
    path = tmp_path / "m.json"
    path.write_text(json.dumps(mu.to_dict()))
    assert AtomicMeasure.load(path) == mu


@given(measures)
def test_poisson_at_origin_is_mass(mu):
    assert mu.poisson_integral(0) == pytest.approx(mu.total_mass(), rel=1e-12)


@given(measures, measures, disc)
def test_poisson_linear(m1, m2, z):
    lhs = (m1 + m2).poisson_integral(z)
    rhs = m1.poisson_integral(z) + m2.poisson_integral(z)
    assert lhs == pytest.approx(rhs, rel=1e-12)


@given(measures, disc)
def test_poisson_matches_extended_precision(mu, z):
    assert mu.poisson_integral(z) == pytest.approx(float(poisson_mp(mu.atoms, z)), rel=1e-10)


@given(measures)
def test_radial_growth_toward_atom(mu):
    th = mu.atoms[0][0]
    r = np.linspace(0.9, 0.999999, 200)
    vals = mu.poisson_integral(r * np.exp(1j * th))
    assert np.all(np.diff(vals) > 0)
