import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dmu.cyclicity import (AGREEMENT_FLOOR, AGREEMENT_TOL, agrees, brown_shields_predict,
                           coefficients_of, cyclicity_report, distance_sequence, extrapolate,
                           gram_system)
from dmu.dirichlet import mu_inner
from dmu.functions import StructuredFunction as S
from dmu.invariant import Polynomial
from dmu.measures import AtomicMeasure, Family

D0 = AtomicMeasure.dirac(0.0)
angle = st.floats(0, 2 * math.pi)


def test_gram_entries_match_inner_product():
    f = S.from_polynomial([1, -1])
    g, b = gram_system(f, D0, 2)
    for j in range(3):
        for k in range(3):
            expect = mu_inner(S.monomial(j) * f, S.monomial(k) * f, D0)
            assert abs(g[j, k] - expect) < 1e-8
        assert abs(b[j] - mu_inner(S.constant(1.0), S.monomial(j) * f, D0)) < 1e-8


def test_gram_example_values():
    g, b = gram_system(Polynomial((1.0,)), D0, 3)
    m = np.arange(4)
    assert np.allclose(g, np.eye(4) + np.minimum.outer(m, m))
    assert np.allclose(b, [1, 0, 0, 0])


def test_gram_is_hermitian():
    g, _ = gram_system(Polynomial((1, 0.5j, 2)), AtomicMeasure(((0.0, 1.0), (1.0, 2.0))), 10)
    assert np.allclose(g, g.conj().T)


def test_z_has_unit_distance():
    d = distance_sequence(S.monomial(1), D0, 20)
    assert np.allclose(d, 1.0, atol=1e-12)


def test_one_has_zero_distance():
    assert np.allclose(distance_sequence(S.constant(1.0), D0, 5), 0.0, atol=1e-14)


def test_one_minus_z_distances():
    d = np.asarray(distance_sequence(Polynomial((1, -1)), D0, 80))
    assert np.all(d > 0.5)
    assert np.all(np.diff(d) <= 1e-12)


def test_structured_and_polynomial_inputs_agree():
    a = distance_sequence(S.from_polynomial([1, 1]), D0, 30)
    b = distance_sequence(Polynomial((1, 1)), D0, 30)
    assert np.allclose(a, b, atol=1e-10)


def test_coefficients_of_inputs():
    assert np.allclose(coefficients_of([1, 2]), [1, 2])
    assert np.allclose(coefficients_of(Polynomial((1, 2))), [1, 2])


@given(st.floats(0.1, 100.0), st.integers(0, 3))
def test_scaling_invariance(c, k):
    fs = [(1, 1), (1, -1), (2, 1, 0.5), (1, 0, -1)]
    f = np.asarray(fs[k], dtype=float)
    a = np.asarray(distance_sequence(c * f, D0, 20))
    b = np.asarray(distance_sequence(f, D0, 20))
    assert np.allclose(a, b, atol=1e-10)


@given(st.lists(st.tuples(angle, st.floats(0.01, 3.0)), min_size=1, max_size=4),
       st.lists(st.complex_numbers(max_magnitude=2), min_size=1, max_size=4))
def test_distances_nonincreasing_and_bounded(atoms, coeffs):
    mu = AtomicMeasure(tuple(atoms))
    c = [3.0 + 0j] + coeffs
    d = np.asarray(distance_sequence(c, mu, 15))
    assert np.all(np.diff(d) <= 1e-10)
    assert np.all(d <= 1 + 1e-12) and np.all(d >= 0)


def test_extrapolate_examples():
    n = np.arange(60, dtype=float)
    d = 0.3 + 2.0 / (n + 1)
    a, fit = extrapolate(d)
    assert a == pytest.approx(0.3, abs=1e-3)
    assert extrapolate([0.5] * 10)[0] == 0.5
    assert math.isnan(extrapolate([])[0])
    assert extrapolate(1 / np.sqrt(n + 1))[0] < 1e-3


def test_brown_shields_examples():
    cert, pred = brown_shields_predict(S.from_polynomial([1, 1]), D0)
    assert pred is True and cert.is_outer and [p.theta for p in cert.boundary_zeros] == [math.pi]
    cert, pred = brown_shields_predict(S.from_polynomial([1, -1]), D0)
    assert pred is False
    assert brown_shields_predict(S.monomial(1), D0)[1] is False
    assert brown_shields_predict(S.singular_atom(1.0), D0)[1] is False
    crit = AtomicMeasure(families=(Family(0.0, 0.5, 1.0, 0.5, 30),))
    assert brown_shields_predict(S.power(0.0), crit)[1] is None
    assert brown_shields_predict(S.power(0.0), AtomicMeasure())[1] is True


def test_agrees_thresholds():
    assert agrees(True, AGREEMENT_TOL) and not agrees(True, 0.2)
    assert agrees(False, AGREEMENT_FLOOR) and not agrees(False, 0.01)
    assert not agrees(None, 0.0) and not agrees(True, math.nan)


def test_quartet_report():
    expect = {(1,): 0.0, (0, 1): 1.0}
    for c, limit in expect.items():
        r = cyclicity_report(S.from_polynomial(list(c)), D0, 100)
        assert abs(r.extrapolated_limit - limit) <= 1e-8 and r.numerics_agree
    r = cyclicity_report(S.from_polynomial([1, -1]), D0, 100)
    assert r.extrapolated_limit >= AGREEMENT_FLOOR and r.predicted_cyclic is False and r.numerics_agree
    r = cyclicity_report(S.from_polynomial([1, 1]), D0, 100)
    assert r.extrapolated_limit <= AGREEMENT_TOL and r.predicted_cyclic is True and r.numerics_agree
    assert len(r.distances) == 101 and len(r.condition_numbers) == 101
    assert r.failure is None and set(r.to_dict()) >= {"distances", "certificate", "thresholds"}


@given(st.floats(1.2, 4.0), angle, st.lists(st.tuples(angle, st.floats(0.1, 2.0)),
                                            min_size=1, max_size=3))
def test_zero_free_closed_disc_is_cyclic(r, th, atoms):
    # polynomial without zeros in the closed disc: cyclic, distances tend to 0 geometrically
    mu = AtomicMeasure(tuple(atoms))
    f = Polynomial.from_roots([r * np.exp(1j * th)])
    d = distance_sequence(f, mu, 60)
    assert d[-1] < 0.05 * max(d[0], 1e-300) or d[-1] < 1e-6


@given(angle, st.floats(0.1, 3.0))
def test_zero_on_atom_not_cyclic(th, w):
    # f vanishing at an atom: point evaluation bounded there, distance bounded below
    mu = AtomicMeasure(((th, w),))
    f = Polynomial.from_roots([np.exp(1j * th)])
    d = distance_sequence(f, mu, 60)
    assert d[-1] >= AGREEMENT_FLOOR
    _, pred = brown_shields_predict(S.from_polynomial(f.coefficients), mu)
    assert pred is False
