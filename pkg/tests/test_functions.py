import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dmu.functions import (Arc, BoundaryModulus, StructuredFunction, boundary_values,
                           boundary_zero_set, derivative, divides_inner, evaluate, fusion,
                           gcd_inner, h2_norm_sq, herglotz_outer, lower_zero_set,
                           radial_limit_modulus, taylor_coefficients, vee, wedge)
from dmu.quadrature import Nodes

S = StructuredFunction
rng = np.random.default_rng(7)
interior = st.tuples(st.floats(0, 0.97), st.floats(0, 2 * math.pi)).map(
    lambda rt: rt[0] * cmath.exp(1j * rt[1]))


def boundary_modulus(f, t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    nodes = Nodes(t=t, h=np.zeros(t.shape), anchor=np.full(t.shape, np.nan), offset=np.zeros(t.shape))
    return np.exp(f.outer.log_modulus(nodes))


def random_interior(n, rmax=0.95):
    return rng.uniform(0, rmax, n) * np.exp(1j * rng.uniform(0, 2 * math.pi, n))


def test_constant_modulus():
    f = S.constant(2.5)
    assert evaluate(f, 0.3 + 0.2j) == pytest.approx(2.5)


def test_power_factor_is_one_minus_z():
    f = S.power(0.0, 1.0)
    z = random_interior(20)
    assert np.allclose(evaluate(f, z), 1 - z, atol=1e-14)
    assert np.allclose(derivative(f, z), -1, atol=1e-13)


def test_blaschke_zero():
    f = S.blaschke_product(0.5)
    assert abs(evaluate(f, 0.5)) < 1e-15
    assert abs(evaluate(f, 0.9j)) < 1


def test_evaluate_domain_error():
    with pytest.raises(ValueError):
        evaluate(S.constant(1.0), 1.0)


def test_normalization_positive_at_origin():
    for f in (S.from_polynomial([1, -2, 3]), S.power(1.0, 0.7), S.blaschke_product(0.3j)):
        v = f.outer.value(Nodes(np.zeros(1), np.ones(1), np.zeros(1), np.zeros(1)))[0]
        assert v.real > 0 and abs(v.imag) < 1e-14


def test_from_polynomial_matches_up_to_unimodular():
    coeffs = [2.0, 0.3 - 0.4j, 0.5, 1j]
    f = S.from_polynomial(coeffs)
    z = random_interior(30)
    ratio = evaluate(f, z) / np.polynomial.polynomial.polyval(z, coeffs)
    assert np.allclose(np.abs(ratio), 1, atol=1e-12)
    assert np.ptp(np.angle(ratio)) < 1e-10


def test_from_polynomial_circle_roots_become_power_factors():
    f = S.from_polynomial([-1, 0, 1])
    assert [a for _, a in f.outer.powers] == [1.0, 1.0]
    assert f.outer.grid is None


def test_radial_limit_examples():
    assert radial_limit_modulus(S.power(0.0), 0.0) == 0.0
    assert radial_limit_modulus(S.power(0.0, 0.5), math.pi) == pytest.approx(math.sqrt(2))
    f = S.singular_atom(0.0)
    assert radial_limit_modulus(f, 0.0) == 0.0
    # oracle: the radial samples decrease to 0
    vals = [abs(evaluate(f, r)) for r in (0.9, 0.99, 0.999)]
    assert vals[0] > vals[1] > vals[2] and vals[2] < 1e-300 + math.exp(-1000)
    assert math.isinf(radial_limit_modulus(S.power(1.0, -0.25), 1.0))


def test_boundary_zero_sets():
    assert [p.theta for p in boundary_zero_set(S.power(0.0))] == [0.0]
    assert boundary_zero_set(S.constant(3.0)) == ()
    f = S.power(0.0) * S.singular_atom(math.pi)
    assert [p.theta for p in boundary_zero_set(f)] == [0.0, math.pi]
    # oracle: radial sampling at both points tends to zero
    for th in (0.0, math.pi):
        assert abs(evaluate(f, 0.9999 * cmath.exp(1j * th))) < 1e-3


def test_lower_zero_set():
    assert lower_zero_set(S.constant(1.0)).empty
    z = lower_zero_set(S.blaschke_product(0.5) * S.power(0.0))
    assert z.disk_zeros == ((0.5 + 0j, 1),)
    assert [p.theta for p in z.boundary_points] == [0.0]
    assert [p.theta for p in lower_zero_set(S.singular_atom(0.0)).boundary_points] == [0.0]


def test_lattice_definitions():
    f, one = S.power(0.0), S.constant(1.0)
    t = np.linspace(0.01, 2 * math.pi - 0.01, 257)
    chord = np.abs(np.exp(1j * t) - 1)
    assert np.allclose(boundary_modulus(wedge(f, one), t), np.minimum(chord, 1), atol=3e-3)
    assert np.allclose(boundary_modulus(vee(f, one), t), np.maximum(chord, 1), atol=3e-3)
    assert wedge(f, f) == f
    grid_t = 2 * math.pi * np.arange(512) / 4096 * 8 + 1e-3
    assert np.allclose(boundary_modulus(wedge(f, one), grid_t), np.minimum(np.abs(np.exp(1j * grid_t) - 1), 1),
                       atol=3e-3)


def test_lattice_rejects_inner_part():
    with pytest.raises(ValueError):
        wedge(S.monomial(1), S.constant(1.0))


def test_lattice_power_exponents():
    f = S.power(0.0, 2.0)
    g = S.power(0.0, 0.5)
    assert dict(wedge(f, g).outer.powers)[0.0] == 2.0
    assert dict(vee(f, g).outer.powers)[0.0] == 0.5


def test_fusion_constant_one():
    a, b = 0.0, math.pi
    fv = fusion(S.constant(1.0), Arc(a, b))
    t = 2 * math.pi * (np.arange(64) + 0.5) / 64
    zeta = np.exp(1j * t)
    expect = np.abs((zeta - 1) * (-1 - zeta))
    assert np.allclose(boundary_modulus(fv, t), expect, rtol=1e-10)


def test_fusion_constant_two_upper_arc():
    fv = fusion(S.constant(2.0), Arc(0.0, math.pi))
    t = 2 * math.pi * (np.arange(64) + 0.5) / 64
    zeta = np.exp(1j * t)
    base = np.abs((zeta - 1) * (-1 - zeta))
    expect = np.where(t < math.pi, 2 * base, base)
    got = boundary_modulus(fv, t)
    # the grid term is a trigonometric interpolant of a jump; compare on the grid points
    n = len(fv.outer.grid)
    tg = 2 * math.pi * np.arange(1, n, 37) / n
    zg = np.exp(1j * tg)
    bg = np.abs((zg - 1) * (-1 - zg))
    assert np.allclose(boundary_modulus(fv, tg), np.where(tg <= math.pi, 2 * bg, bg), rtol=1e-9)
    assert np.mean(np.abs(got - expect) / expect < 1e-2) > 0.9


def test_fusion_vanishes_at_endpoints():
    f = S.from_polynomial([2, 0.5])
    fv = fusion(f, Arc(1.0, 2.5))
    assert radial_limit_modulus(fv, 1.0) == 0.0
    assert radial_limit_modulus(fv, 2.5) == 0.0
    with pytest.raises(ValueError):
        fusion(S.power(0.0, -0.25), Arc(1.0, 2.0))


def test_gcd_inner_examples():
    g = gcd_inner(S.blaschke_product(0.5, 0.3), S.blaschke_product(0.5))
    assert g.blaschke == ((0.5 + 0j, 1),)
    assert gcd_inner(S.power(0.0), S.blaschke_product(0.5)).is_outer
    s = gcd_inner(S.singular_atom(0.0, 2.0), S.singular_atom(0.0, 1.0))
    assert s.singular == ((0.0, 1.0),)


def test_gcd_divides_both():
    f = S.blaschke_product(0.5, 0.5, 0.2j) * S.singular_atom(1.0, 2.0)
    g = S(blaschke=((0.5, 1), (0.1, 1)), singular=((1.0, 0.5), (2.0, 1.0)))
    d = gcd_inner(f, g)
    assert divides_inner(d, f) and divides_inner(d, g)


def test_h2_norm_examples():
    assert h2_norm_sq(S.monomial(5)).value == 1.0
    assert h2_norm_sq(S.power(0.0)).value == pytest.approx(2.0, rel=1e-13)
    assert h2_norm_sq(S.constant(3.0)).value == pytest.approx(9.0)
    # |1 - e^{it}| averages to 4/pi
    assert h2_norm_sq(S.power(0.0, 0.5)).value == pytest.approx(4 / math.pi, rel=1e-12)


def test_taylor_coefficients():
    c = taylor_coefficients(S.from_polynomial([1, 2, 3]))
    assert np.allclose(np.abs(c), [1, 2, 3], atol=1e-12)
    c = taylor_coefficients(S.power(0.0, 0.5), n_samples=4096)
    # (1-z)^{1/2} = 1 - z/2 - z^2/8 - ...
    assert np.allclose(c[:3], [1, -0.5, -0.125], atol=1e-10)


def test_json_round_trip(tmp_path):
    f = S(blaschke=((0.3 + 0.1j, 2),), singular=((1.0, 0.5),),
          outer=BoundaryModulus(0.2, ((2.0, 0.5),), tuple(np.sin(np.arange(8)))))
    p = tmp_path / "f.json"
    p.write_text(json.dumps(f.to_dict()))
    assert S.load(p) == f


def test_invalid_constructions():
    with pytest.raises(ValueError):
        BoundaryModulus(0.0, ((0.0, -0.5),))
    with pytest.raises(ValueError):
        S(blaschke=((1.0, 1),))
    with pytest.raises(ValueError):
        S(singular=((0.0, -1.0),))
    with pytest.raises(ValueError):
        Arc(1.0, 1.0)


def test_herglotz_matches_power_closed_form_20_points():
    f = S.power(0.0)
    for z in random_interior(20, 0.9):
        h = herglotz_outer(f.outer.log_modulus, z, breakpoints=[0.0])
        assert abs(h - (1 - z)) < 1e-10


@given(interior, st.floats(0, 2 * math.pi), st.floats(-0.45, 3.0))
def test_herglotz_matches_power_closed_form(z, theta, alpha):
    f = S.power(theta, alpha)
    h = herglotz_outer(f.outer.log_modulus, z, breakpoints=[theta])
    closed = (1 - cmath.exp(-1j * theta) * z) ** alpha
    assert abs(h - closed) <= 1e-8 * max(1.0, abs(closed))


@given(st.lists(st.tuples(st.floats(0, 2 * math.pi), st.floats(0, 2.0)), max_size=3),
       st.floats(-1, 1), interior)
def test_maximum_principle(powers, c, z):
    f = S(outer=BoundaryModulus(c, tuple(powers)))
    t = np.linspace(0, 2 * math.pi, 4001)
    sup = float(np.max(boundary_modulus(f, t)))
    assert abs(evaluate(f, z)) <= sup * (1 + 1e-9)


def test_boundary_values_unimodular_inner():
    f = S.blaschke_product(0.5, 0.3j) * S.singular_atom(1.0)
    v = boundary_values(f, np.linspace(2.0, 6.0, 50))
    assert np.allclose(np.abs(v), 1, atol=1e-12)
