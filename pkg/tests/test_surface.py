import math
import random
from fractions import Fraction

import pytest

from ncsurface.surface import (AlphaOutOfRangeError, CommPolynomial3,
                               NotRegularError, SurfaceForm, SurfaceSpec,
                               bracket_constraint, build_genus_polynomial,
                               count_simple_roots, critical_values_torus_sphere,
                               euler_characteristic, genus_product_polynomial,
                               genus_window_bound, poisson_bracket)

X, Y, Z = CommPolynomial3.x(), CommPolynomial3.y(), CommPolynomial3.z()


def rand_poly(rng, max_degree=3):
    terms = {}
    for _ in range(4):
        expo = tuple(rng.randint(0, 1) for _ in range(3))
        if sum(expo) > max_degree:
            continue
        terms[expo] = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
    return CommPolynomial3(terms)


# ---------------------------------------------------------------------------
# exact root counting
# ---------------------------------------------------------------------------

def test_count_simple_roots_examples():
    assert count_simple_roots([Fraction(-1), 0, 1]) == (2, True)     # x^2 - 1
    assert count_simple_roots([Fraction(1), -2, 1]) == (1, False)    # (x - 1)^2
    assert count_simple_roots([Fraction(4), 0, -5, 0, 1]) == (4, True)


def test_count_simple_roots_rejects_zero():
    with pytest.raises(ValueError):
        count_simple_roots([Fraction(0)])


# ---------------------------------------------------------------------------
# genus-g construction
# ---------------------------------------------------------------------------

def test_product_polynomial_roots():
    for g in (1, 2, 3):
        coeffs = genus_product_polynomial(g)
        assert coeffs[-1] == 1
        for j in range(1, g + 1):
            value = sum(a * Fraction(j * j) ** k for k, a in enumerate(coeffs))
            assert value == 0


def test_window_bound_matches_endpoint_maxima():
    # for g <= 4 the max of G on [0, g^2+1] sits at an endpoint; hand values
    for g, expected in [(1, 1), (2, 4), (3, 54), (4, 1664)]:
        assert genus_window_bound(g) == expected


def test_window_bound_dominates_samples():
    for g in (2, 3):
        coeffs = genus_product_polynomial(g)
        bound = genus_window_bound(g)
        hi = Fraction(g * g + 1)
        for i in range(41):
            t = hi * i / 40
            value = sum(a * t ** k for k, a in enumerate(coeffs))
            assert value <= bound


def test_build_genus_polynomial_g1():
    spec = build_genus_polynomial(1, Fraction(1), Fraction(1, 2))
    data = euler_characteristic(spec)
    assert data.n_plus == 2 and data.n_minus == 2
    assert data.chi == 0 and data.genus == 1


def test_build_genus_polynomial_g2():
    spec = build_genus_polynomial(2, Fraction(1), Fraction(1, 8))
    data = euler_characteristic(spec)
    assert data.n_plus == 2 and data.n_minus == 4
    assert data.chi == -2 and data.genus == 2


def test_alpha_window_is_open():
    with pytest.raises(AlphaOutOfRangeError):
        build_genus_polynomial(2, Fraction(1), Fraction(2, 4))   # alpha = 2mu/M
    with pytest.raises(AlphaOutOfRangeError):
        build_genus_polynomial(1, Fraction(1), Fraction(0))
    with pytest.raises(AlphaOutOfRangeError):
        build_genus_polynomial(1, Fraction(1), Fraction(3))


def test_euler_characteristic_genus_family():
    for g in (1, 2, 3, 4):
        alpha = Fraction(1) / genus_window_bound(g)
        data = euler_characteristic(build_genus_polynomial(g, Fraction(1), alpha))
        assert data.genus == g and data.chi == 2 - 2 * g
        assert len(data.critical_x_values) == 2 + 2 * g
        assert list(data.critical_x_values) == sorted(data.critical_x_values)


def test_not_regular_detected():
    # P + mu = (x^2 - 1)^2 has double roots
    spec = SurfaceSpec(None, (Fraction(0), 0, Fraction(-2), 0, Fraction(1)),
                       Fraction(1), SurfaceForm.GENERAL_GENUS)
    with pytest.raises(NotRegularError):
        euler_characteristic(spec)


def test_torus_sphere_euler_sphere_regime():
    spec = SurfaceSpec(None, (Fraction(-1, 2), 0, Fraction(1)), Fraction(1),
                       SurfaceForm.TORUS_SPHERE)
    data = euler_characteristic(spec)
    assert data.n_plus == 2 and data.n_minus == 0 and data.genus == 0
    assert len(data.critical_x_values) == 2


def test_torus_sphere_euler_torus_regime():
    spec = SurfaceSpec(None, (Fraction(-13, 10), 0, Fraction(1)), Fraction(1),
                       SurfaceForm.TORUS_SPHERE)
    data = euler_characteristic(spec)
    assert data.n_plus == 2 and data.n_minus == 2 and data.genus == 1
    assert len(data.critical_x_values) == 4


# ---------------------------------------------------------------------------
# Poisson bracket
# ---------------------------------------------------------------------------

def torus_constraint(mu=Fraction(1), c=Fraction(1)):
    return bracket_constraint([-mu, Fraction(0), Fraction(1)], c)


def test_bracket_xy_equals_z():
    assert poisson_bracket(X, Y, torus_constraint()) == Z


def test_bracket_antisymmetry_and_ff():
    C = torus_constraint()
    f = X * X + 2 * Y
    assert poisson_bracket(f, f, C).is_zero()
    g = Y * Z
    assert poisson_bracket(f, g, C) == -1 * poisson_bracket(g, f, C)


def test_bracket_yz_equals_dxC():
    mu = Fraction(3, 2)
    C = torus_constraint(mu=mu)
    expected = 2 * X * (X * X + Y * Y - CommPolynomial3.constant(mu))
    assert poisson_bracket(Y, Z, C) == expected


def test_bracket_zx_equals_dyC():
    mu = Fraction(1)
    C = torus_constraint(mu=mu)
    expected = 2 * Y * (X * X + Y * Y - CommPolynomial3.constant(mu))
    assert poisson_bracket(Z, X, C) == expected


def test_jacobi_identity_random_triples():
    rng = random.Random(29)
    C = torus_constraint()
    for _ in range(20):
        f, g, h = rand_poly(rng), rand_poly(rng), rand_poly(rng)
        total = (poisson_bracket(f, poisson_bracket(g, h, C), C)
                 + poisson_bracket(g, poisson_bracket(h, f, C), C)
                 + poisson_bracket(h, poisson_bracket(f, g, C), C))
        assert total.is_zero()


def test_leibniz_rule():
    rng = random.Random(37)
    C = torus_constraint()
    for _ in range(10):
        f, g, h = rand_poly(rng), rand_poly(rng), rand_poly(rng)
        lhs = poisson_bracket(f, g * h, C)
        rhs = poisson_bracket(f, g, C) * h + g * poisson_bracket(f, h, C)
        assert lhs == rhs


def test_constraint_is_casimir():
    rng = random.Random(43)
    C = torus_constraint(mu=Fraction(2, 3), c=Fraction(5, 4))
    for _ in range(10):
        assert poisson_bracket(C, rand_poly(rng), C).is_zero()


# ---------------------------------------------------------------------------
# critical values
# ---------------------------------------------------------------------------

def test_critical_values_toral():
    values = critical_values_torus_sphere(1.3, 1.0)
    expected = sorted([-math.sqrt(2.3), -math.sqrt(0.3), math.sqrt(0.3), math.sqrt(2.3)])
    assert len(values) == 4
    assert all(abs(a - b) < 1e-14 for a, b in zip(values, expected))


def test_critical_values_spherical():
    values = critical_values_torus_sphere(0.9, 1.0)
    assert len(values) == 2
    assert abs(values[1] - math.sqrt(1.9)) < 1e-14


def test_critical_values_transition():
    values = critical_values_torus_sphere(1.0, 1.0)
    assert len(values) == 3
    assert values[1] == 0.0
    assert abs(values[2] - math.sqrt(2.0)) < 1e-14


def test_critical_values_validation():
    with pytest.raises(ValueError):
        critical_values_torus_sphere(1.0, 0.0)
    with pytest.raises(ValueError):
        critical_values_torus_sphere(-2.0, 1.0)
