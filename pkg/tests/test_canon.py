from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from hermitek.arith import Arith
from hermitek.basis import KnotConfiguration
from hermitek.canon import (
    bernoulli,
    bernoulli_number,
    bernoulli_polynomial,
    equispaced_sup,
    hinge,
    monomial,
    perfect_spline,
    periodic_monospline,
)
from hermitek.errors import ConfigurationError, DomainError
from hermitek.polyalg import differentiate, evaluate, sup_norm

from conftest import EXACT, F256, random_config


def bern_eval(n, x):
    return sum(c * x**i for i, c in enumerate(bernoulli_polynomial(n)))


def test_hinge_values():
    f = hinge(3, Fraction(1, 2), EXACT)
    assert evaluate(f, 1) == Fraction(1, 8)
    assert evaluate(f, Fraction(1, 4)) == 0


def test_hinge_smoothness():
    for k in range(3, 9):
        f = hinge(k, Fraction(2, 3), EXACT)
        assert f.continuity == k - 2
        for r in range(k - 1):
            assert f.continuity_defect(r) == 0
        assert f.continuity_defect(k - 1) != 0


def test_hinge_location_checks():
    with pytest.raises(DomainError):
        hinge(3, 0)
    with pytest.raises(DomainError):
        hinge(3, 1.2)
    with pytest.raises(ConfigurationError):
        hinge(2, 0.5)


def test_hinge_kink():
    f = hinge(3, 0.66, F256)
    with F256.ctx():
        assert evaluate(f, 0.66) == 0
        assert evaluate(f, 0.66, 1) == 0


def test_kernel_identity_quadrature(rng):
    # (t-u)_+^{k+j-1} = (k+j-1)!/(j-1)! * int_0^1 f_v(t) (v-u)_+^{j-1} dv with j = 1
    k, j = 3, 1
    for _ in range(10):
        t, u = rng.random(2)
        lhs = max(t - u, 0.0) ** (k + j - 1)
        if t <= u:
            # f_v(t) = 0 for every v > u
            assert float(evaluate(hinge(k, float(u), F256), float(t))) == 0
            continue
        v = np.linspace(u, t, 4001)
        vals = np.array([float(evaluate(hinge(k, float(x), F256), float(t))) for x in v[:-1]] + [0.0])
        vals *= (v - u) ** (j - 1)
        integral = float(np.sum((vals[1:] + vals[:-1]) / 2 * np.diff(v)))
        assert abs(factorial(k + j - 1) / factorial(j - 1) * integral - lhs) < 1e-6


def test_monomial():
    f = monomial(3, EXACT)
    assert evaluate(f, 0) == 0 and evaluate(f, 1) == 1
    assert differentiate(f, 6).pieces[0].coeffs == (720,)


@pytest.mark.parametrize("k", [3, 4, 5, 7])
def test_perfect_spline_sign_pattern(k, rng):
    config = random_config(rng, k, exact=True)
    s = perfect_spline(config, EXACT)
    d = differentiate(s, 2 * k)
    assert [p.coeffs[0] for p in d.pieces] == [(-1) ** j for j in range(2 * k - 3)]
    for r in range(2 * k):
        assert s.continuity_defect(r) == 0


def test_perfect_spline_thirds():
    s = perfect_spline(KnotConfiguration(3, (Fraction(1, 3), Fraction(2, 3))), EXACT)
    assert evaluate(s, 0) == 0
    assert s.continuity == 5
    assert evaluate(s, 1) == (1 + 2 * (-(Fraction(2, 3) ** 6) + Fraction(1, 3) ** 6)) / 720


def test_bernoulli_numbers():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(6) == Fraction(1, 42)
    assert bernoulli_number(8) == Fraction(-1, 30)
    assert bernoulli_number(10) == Fraction(5, 66)
    assert bernoulli_number(12) == Fraction(-691, 2730)
    assert all(bernoulli_number(n) == 0 for n in range(3, 30, 2))
    with pytest.raises(ValueError):
        bernoulli_number(-1)


def test_bernoulli_table():
    t = bernoulli(4)
    assert len(t.numbers) == 5 and len(t.polynomials) == 5
    assert t.polynomials[2] == (Fraction(1, 6), -1, 1)


def test_bernoulli_polynomial_derivative():
    for n in range(1, 15):
        p = bernoulli_polynomial(n)
        q = bernoulli_polynomial(n - 1)
        assert tuple(i * c for i, c in enumerate(p))[1:] == tuple(n * c for c in q)


@pytest.mark.parametrize("k", range(1, 13))
def test_bernoulli_half_identity(k):
    n = 2 * k
    assert bern_eval(n, Fraction(1, 2)) == -(1 - Fraction(2) ** (1 - n)) * bernoulli_number(n)
    assert bern_eval(n, 0) == bern_eval(n, 1) == bernoulli_number(n)


@pytest.mark.parametrize("k", range(3, 11))
def test_monospline_sup_is_closed_form(k):
    r = sup_norm(periodic_monospline(k))
    assert r.value == equispaced_sup(k)
    assert r.certified


def test_monospline_zeros_and_period():
    k = 5
    m = periodic_monospline(k)
    h = Fraction(1, 2 * k - 3)
    for j in range(2 * k - 2):
        assert evaluate(m, j * h) == 0
    for t in (Fraction(1, 17), Fraction(1, 9)):
        assert evaluate(m, t) == evaluate(m, t + 3 * h)


def test_monospline_float_mode():
    m = periodic_monospline(3, Arith(256))
    assert abs(float(sup_norm(m).value) - 1 / 15552) < 1e-20


def test_equispaced_table():
    assert equispaced_sup(3) == Fraction(1, 15552)
    assert equispaced_sup(4) == Fraction(17, 100000000)
    assert equispaced_sup(5) == Fraction(155, 289254654976)
    assert equispaced_sup(6) == Fraction(691, 385610460475392)


@pytest.mark.parametrize("k", range(7, 11))
def test_equispaced_extended_decimal_two_precisions(k):
    # closed form evaluated in floating point at two precisions agrees with the rational
    from gmpy2 import mpfr
    import gmpy2

    n = 2 * k
    vals = []
    for p in (128, 512):
        with gmpy2.context(precision=p):
            b = mpfr(bernoulli_number(n).numerator) / bernoulli_number(n).denominator
            vals.append(2 * abs((1 - mpfr(2) ** (-n)) * b) / mpfr(2 * k - 3) ** n)
    exact = equispaced_sup(k)
    for v in vals:
        assert abs(Fraction(str(v)) / exact - 1) < Fraction(1, 10**30)
