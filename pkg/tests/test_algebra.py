"""
Tests for exact polynomials, Sturm counting and restricted characteristic polynomials.
"""
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings as hyp_settings, strategies as st

from sinrmap.algebra import (
    RationalUniPoly,
    cauchy_bound,
    eval_poly,
    exact_sinr_sign,
    isolate_all_roots,
    isolate_roots,
    nonpositive_on,
    refine_root,
    restrict_characteristic,
    restrict_noise,
    square_free_part,
    sturm_count,
)
from sinrmap.sinr_core import is_heard
from tests.factories import make_network


def test_from_coeffs_strips_trailing_zeros():
    f = RationalUniPoly.from_coeffs([1, 2, 0, 0])
    assert f.coeffs == (Fraction(1), Fraction(2))
    assert f.degree == 1
    assert RationalUniPoly.from_coeffs([0, 0]).is_zero
    assert RationalUniPoly.from_coeffs([]).degree == -1


def test_from_roots_and_evaluation():
    f = RationalUniPoly.from_roots([1, 2, 3])
    assert f.coeffs == (-6, 11, -6, 1)
    assert f(2) == 0
    assert eval_poly(f, Fraction(1, 2)) == Fraction(-15, 8)


def test_derivative_and_negation():
    f = RationalUniPoly.from_coeffs([1, 0, 3])
    assert f.derivative().coeffs == (0, 6)
    assert (-f).coeffs == (-1, 0, -3)


def test_square_free_part_drops_repeated_roots():
    f = RationalUniPoly.from_roots([1, 1, 2])
    g = square_free_part(f)
    assert g.degree == 2
    assert g(1) == 0 and g(2) == 0
    with pytest.raises(ValueError):
        square_free_part(RationalUniPoly())


def test_sturm_count_half_open_interval():
    f = RationalUniPoly.from_roots([1, 2, 3])
    assert sturm_count(f, 0, 3) == 3
    assert sturm_count(f, 1, 3) == 2
    assert sturm_count(f, 0, 1) == 1
    assert sturm_count(f, 3, 10) == 0


def test_sturm_count_counts_distinct_roots():
    f = RationalUniPoly.from_roots([1, 1, 1, 2])
    assert sturm_count(f, 0, 5) == 2


def test_sturm_count_errors():
    f = RationalUniPoly.from_roots([1])
    with pytest.raises(ValueError):
        sturm_count(RationalUniPoly(), 0, 1)
    with pytest.raises(ValueError):
        sturm_count(f, 1, 1)


def test_constant_has_no_roots():
    assert sturm_count(RationalUniPoly.from_coeffs([5]), -10, 10) == 0
    assert len(isolate_all_roots(RationalUniPoly.from_coeffs([5]))) == 0


def test_cauchy_bound():
    f = RationalUniPoly.from_roots([-7, 3])
    assert cauchy_bound(f) > 7


def test_isolate_and_refine_irrational_roots():
    f = RationalUniPoly.from_coeffs([-2, 0, 1])
    isolation = isolate_all_roots(f)
    assert len(isolation) == 2
    lo, hi = refine_root(f, isolation.intervals[1])
    assert float(hi - lo) <= 2.0**-52
    assert float(lo) == pytest.approx(2**0.5, rel=1e-15)


def test_refine_rational_root_is_exact():
    f = RationalUniPoly.from_roots([Fraction(1, 4), 2])
    isolation = isolate_roots(f, 0, 1)
    assert refine_root(f, isolation.intervals[0]) == (Fraction(1, 4), Fraction(1, 4))


@hyp_settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=5))
def test_isolation_finds_every_distinct_root(roots):
    f = RationalUniPoly.from_roots([Fraction(r, 4) for r in roots])
    isolation = isolate_all_roots(f)
    assert len(isolation) == len(set(roots))
    for (lo, hi), r in zip(isolation.intervals, sorted(set(roots))):
        assert lo < Fraction(r, 4) <= hi


def test_restrict_characteristic_two_stations(pair_network):
    """On (1,0)->(3,0): F = D0 - D1 = 16 t - 8, zero at the midpoint."""
    f = restrict_characteristic(pair_network, 0, (1, 0), (3, 0))
    assert f.coeffs == (-8, 16)


def test_restrict_characteristic_matches_is_heard(triangle_network):
    p1, p2 = (-1.0, -0.5), (3.5, 2.0)
    for i in range(triangle_network.n):
        f = restrict_characteristic(triangle_network, i, p1, p2)
        for k in range(1, 20):
            t = Fraction(k, 20)
            point = tuple(a + float(t) * (b - a) for a, b in zip(p1, p2))
            if f(t) == 0:
                continue
            assert (f(t) < 0) == is_heard(triangle_network, i, point)


def test_restrict_characteristic_degree(triangle_network):
    """alpha * n with noise, alpha * (n - 1) without."""
    f = restrict_characteristic(triangle_network, 0, (5, 5), (6, 7))
    assert f.degree == 2 * triangle_network.n


def test_restrict_characteristic_needs_even_alpha():
    net = make_network([((0.0, 0.0), 1.0), ((1.0, 0.0), 1.0)], alpha=3.0)
    with pytest.raises(ValueError, match="even"):
        restrict_characteristic(net, 0, (0, 1), (1, 1))


def test_restrict_characteristic_rejects_degenerate_segment(pair_network):
    with pytest.raises(ValueError, match="coincide"):
        restrict_characteristic(pair_network, 0, (1, 1), (1, 1))


def test_restrict_noise_sign(noisy_pair_network):
    """-prod F^i is negative exactly where nobody is heard."""
    f = restrict_noise(noisy_pair_network, (2, 3), (2, 4))
    assert f(0) < 0 and f(1) < 0
    g = restrict_noise(noisy_pair_network, (0.1, 0), (0.2, 0))
    assert g(0) > 0


def test_exact_sinr_sign(pair_network):
    assert exact_sinr_sign(pair_network, 0, (1, 0)) == -1
    assert exact_sinr_sign(pair_network, 0, (2, 0)) == 0
    assert exact_sinr_sign(pair_network, 0, (3, 0)) == 1
    with pytest.raises(ValueError):
        exact_sinr_sign(pair_network, 0, (0, 0))


def test_nonpositive_on():
    f = RationalUniPoly.from_coeffs([-1, 0, 1])  # t^2 - 1
    assert nonpositive_on(f, -1, 1)
    assert not nonpositive_on(f, 0, 2)
    touching = -RationalUniPoly.from_roots([Fraction(1, 2), Fraction(1, 2)])
    assert nonpositive_on(touching, 0, 1)
    assert nonpositive_on(RationalUniPoly.from_roots([0, 1]), 0, 1)
    # dips below zero twice with a positive bump in between
    bump = RationalUniPoly.from_roots([Fraction(1, 4), Fraction(3, 4)], lead=-1)
    assert not nonpositive_on(bump, 0, 1)


def _dense_case(rng):
    """Integer-coefficient polynomial of degree 1..12 with coefficients in [-1000, 1000]."""
    deg = int(rng.integers(1, 13))
    coeffs = [int(c) for c in rng.integers(-1000, 1001, size=deg + 1)]
    while coeffs[-1] == 0:
        coeffs[-1] = int(rng.integers(-1000, 1001))
    return RationalUniPoly.from_coeffs(coeffs)


def test_sturm_count_agrees_with_sympy_on_dense_polynomials():
    rng = np.random.default_rng(20240611)
    for case in range(1000):
        f = _dense_case(rng)
        if case % 5 == 0:
            r = Fraction(int(rng.integers(-40, 41)), 4)
            f = f * RationalUniPoly.from_roots([r, r])
        a = Fraction(int(rng.integers(-40, 41)), 4)
        b = a + Fraction(int(rng.integers(1, 61)), 4)
        # count_roots works on the closed interval [a, b]
        expected = f.poly.sqf_part().count_roots(
            sympy.Rational(a.numerator, a.denominator), sympy.Rational(b.numerator, b.denominator)
        )
        if eval_poly(f, a) == 0:
            expected -= 1

        assert sturm_count(f, a, b) == expected, (case, f.coeffs, a, b)
        isolation = isolate_roots(f, a, b)
        assert len(isolation) == expected, (case, f.coeffs, a, b)
        for lo, hi in isolation.intervals:
            assert a <= lo < hi <= b
            assert sturm_count(f, lo, hi) == 1
