import numpy as np
import pytest

from miscc.errors import AllZeroRow, DivisorZero, NoRoots
from poly_rat import (Polynomial, RationalFunction, count_rhp_roots, pade_delay, poly_roots,
                      rat_arith, routh_rhp_count)


def test_polynomial_trims_and_is_immutable():
    p = Polynomial([1.0, 2.0, 0.0, 0.0])
    assert p.degree == 1
    assert p.leading == 2.0
    with pytest.raises(AttributeError):
        p.coeffs = [1.0]
    assert Polynomial([]).is_zero


def test_polynomial_arithmetic():
    p = Polynomial([1.0, 1.0])  # 1 + s
    q = Polynomial([-1.0, 1.0])  # -1 + s
    assert p * q == Polynomial([-1.0, 0.0, 1.0])
    assert p + q == Polynomial([0.0, 2.0])
    assert p - q == Polynomial([2.0])
    assert (p * q).deriv() == Polynomial([0.0, 2.0])
    assert p(2.0) == 3.0


def test_rational_rejects_zero_denominator():
    with pytest.raises(DivisorZero):
        RationalFunction([1.0], [0.0])
    with pytest.raises(DivisorZero):
        rat_arith('div', RationalFunction([1.0]), RationalFunction([0.0]))
    with pytest.raises(DivisorZero):
        rat_arith('reciprocal', RationalFunction([0.0], [1.0, 1.0]))


def test_rat_arith_does_not_cancel():
    a = RationalFunction([1.0], [1.0, 1.0], 'a')  # 1/(s+1)
    total = rat_arith('add', a, a)
    assert total.num == Polynomial([2.0, 2.0])
    assert total.den == Polynomial([1.0, 2.0, 1.0])
    assert total.label == 'a+a'

    ratio = rat_arith('div', a, a)
    assert ratio.num.degree == 1 and ratio.den.degree == 1
    s = 2j * np.pi * 10.0
    np.testing.assert_allclose(ratio(s), 1.0)


@pytest.mark.parametrize('kind,expected', [
    ('add', lambda x, y: x + y),
    ('sub', lambda x, y: x - y),
    ('mul', lambda x, y: x * y),
    ('div', lambda x, y: x / y),
])
def test_rat_arith_matches_pointwise(kind, expected):
    a = RationalFunction([2.0, 1.0], [1.0, 3.0, 1.0])
    b = RationalFunction([1.0, -1.0], [5.0, 1.0])
    s = np.array([0.3j, 2j, 1.5 + 7j])
    np.testing.assert_allclose(rat_arith(kind, a, b)(s), expected(a(s), b(s)), rtol=1e-12)


def test_operators_delegate_to_rat_arith():
    a = RationalFunction([1.0], [0.0, 1.0])
    s = 3j
    np.testing.assert_allclose((1 + a)(s), 1 + 1 / s)
    np.testing.assert_allclose((2 * a)(s), 2 / s)
    np.testing.assert_allclose((1 / a)(s), s)
    np.testing.assert_allclose((-a)(s), -1 / s)


def test_relative_degree_and_properness():
    assert RationalFunction([1.0], [1.0, 1.0]).relative_degree == 1
    assert RationalFunction([1.0], [1.0, 1.0]).is_proper
    assert not RationalFunction([0.0, 1.0], [1.0]).is_proper


def test_poly_roots_wide_spread():
    # roots five decades apart, the case-study range
    roots = [-1.0, -1e5, -3e2 + 2e4j, -3e2 - 2e4j]
    p = Polynomial(np.polynomial.polynomial.polyfromroots(roots).real)
    got = np.sort_complex(poly_roots(p).roots)
    np.testing.assert_allclose(got, np.sort_complex(np.array(roots)), rtol=1e-6)


def test_poly_roots_conjugate_symmetric(rng):
    for _ in range(20):
        c = rng.normal(size=7)
        r = poly_roots(Polynomial(c)).roots
        np.testing.assert_allclose(np.sort_complex(r), np.sort_complex(r.conj()), atol=1e-12)


def test_poly_roots_of_constant():
    with pytest.raises(NoRoots):
        poly_roots(Polynomial([3.0]))


@pytest.mark.parametrize('roots,rhp', [
    ([-1.0, -2.0, -3.0], 0),
    ([1.0, -2.0, -3.0], 1),
    ([1.0, 2.0, -5.0], 2),
    ([0.5 + 3j, 0.5 - 3j, -1.0], 2),
    ([-0.1 + 300j, -0.1 - 300j, 2.0, -40.0], 1),
])
def test_count_rhp_roots_agrees_with_routh(roots, rhp):
    p = Polynomial(np.polynomial.polynomial.polyfromroots(roots).real)
    assert count_rhp_roots(p).rhp == rhp
    assert routh_rhp_count(p) == rhp


def test_count_rhp_roots_reports_axis_roots():
    p = Polynomial([4.0, 0.0, 1.0])  # s^2 + 4
    counts = count_rhp_roots(p)
    assert counts.rhp == 0
    assert counts.on_axis == 2


@pytest.mark.parametrize('roots,rhp,on_axis', [
    ([0.5, -1.26e6], 1, 0),
    ([-0.5, -1.26e6], 0, 0),
    ([0.0, -1.26e6], 0, 1),
    ([0.02 + 10j, 0.02 - 10j, -3e5, -4e5], 2, 0),
])
def test_axis_tolerance_is_per_root(roots, rhp, on_axis):
    p = Polynomial(np.polynomial.polynomial.polyfromroots(roots).real)
    counts = count_rhp_roots(p)
    assert (counts.rhp, counts.on_axis) == (rhp, on_axis)


def test_routh_all_zero_row():
    # s^4 - 1 has roots mirrored about the origin
    with pytest.raises(AllZeroRow) as exc:
        routh_rhp_count(Polynomial([-1.0, 0.0, 0.0, 0.0, 1.0]))
    assert exc.value.aux_degree >= 1


def test_routh_random_agreement(rng):
    for _ in range(50):
        n = int(rng.integers(1, 7))
        re = rng.uniform(-10, 10, size=n)
        re[np.abs(re) < 0.5] += 1.0
        p = Polynomial(np.polynomial.polynomial.polyfromroots(re).real)
        assert routh_rhp_count(p) == count_rhp_roots(p).rhp == int(np.sum(re > 0))


def test_pade_delay_coefficients():
    t = 1.5e-4
    g = pade_delay(t)
    np.testing.assert_allclose(g.num.coeffs, [1.0, -t / 2, t ** 2 / 8, -t ** 3 / 48])
    np.testing.assert_allclose(g.den.coeffs, [1.0, t / 2, t ** 2 / 8, t ** 3 / 48])
    assert g.label == 'G_del'


def test_pade_delay_is_all_pass():
    g = pade_delay(1.5 / 10e3)
    f = np.logspace(0, 6, 2000)
    mag = np.abs(g(2j * np.pi * f))
    assert np.max(np.abs(mag - 1.0)) <= 1e-10


def test_pade_delay_rejects_negative():
    with pytest.raises(ValueError):
        pade_delay(-1.0)
