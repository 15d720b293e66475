from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from hermitek.arith import Arith
from hermitek.basis import BasisKind, KnotConfiguration
from hermitek.canon import hinge, monomial, perfect_spline, periodic_monospline, power
from hermitek.errors import ConfigurationError
from hermitek.interpolate import (
    CompleteData,
    HermiteData,
    Mode,
    complete_interpolate,
    escalation_threshold,
    hermite_interpolate,
    interpolation_error,
    solve_error,
)
from hermitek.polyalg import PiecewisePolynomial, evaluate, subtract, sup_norm

from conftest import EXACT, F256, random_config


def random_polynomial(rng, degree):
    c = [Fraction(int(x), int(d)) for x, d in zip(rng.integers(-50, 50, degree + 1), rng.integers(1, 30, degree + 1))]
    return PiecewisePolynomial.single(c, EXACT)


@pytest.mark.parametrize("k", range(3, 8))
def test_polynomial_reproduction_exact(k, rng):
    for i in range(100):
        config = random_config(rng, k, exact=True)
        f = random_polynomial(rng, 2 * k - 1)
        err, report = interpolation_error(config, f, Mode.HERMITE if i % 2 else Mode.COMPLETE, None)
        assert report.value == 0
        assert all(c == 0 for p in err.pieces for c in p.coeffs)


def test_spline_space_member_has_zero_error():
    config = KnotConfiguration(3, (Fraction(1, 4), Fraction(3, 5)))
    # the truncated power (t - 1/4)_+^5 lies in the spline space
    f = hinge(6, Fraction(1, 4), EXACT)
    err, report = interpolation_error(KnotConfiguration(3, config.interior), f, "hermite", None)
    assert report.value == 0


def test_interpolation_conditions_hold():
    config = KnotConfiguration(4, (0.11, 0.33, 0.49, 0.5))
    f = hinge(4, 0.3, F256)
    res = solve_error(config, f)
    s = res.interpolant.spline
    with s.arith.ctx():
        for t in config.sites(s.arith):
            assert abs(evaluate(s, t) - evaluate(f.convert(s.arith), t)) < 2.0**-200
            assert abs(evaluate(s, t, 1) - evaluate(f.convert(s.arith), t, 1)) < 2.0**-190


def test_complete_conditions_hold():
    k = 4
    config = KnotConfiguration(k, (Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)))
    f = monomial(k, EXACT)
    s = complete_interpolate(config, CompleteData.from_function(config, f), precision=None).spline
    for t in config.sites(EXACT):
        assert evaluate(s, t) == evaluate(f, t)
    for r in range(1, k):
        assert evaluate(s, 0, r) == evaluate(f, 0, r)
        assert evaluate(s, 1, r) == evaluate(f, 1, r)


def test_monomial_reference_values():
    r = solve_error(KnotConfiguration(3, (0.3, 0.7)), lambda a: monomial(3, a))
    assert float(r.report.value) == pytest.approx(1.76e-4, rel=1e-12)
    c = solve_error(KnotConfiguration(3, (0.3, 0.7)), lambda a: monomial(3, a), Mode.COMPLETE)
    assert float(c.report.value) == pytest.approx(4.063063063e-4, rel=1e-9)


def test_equispaced_error_is_periodic_monospline():
    for k in (3, 4, 5):
        config = KnotConfiguration.equispaced(k)
        err, _ = interpolation_error(config, monomial(k, EXACT), Mode.HERMITE, None)
        m = periodic_monospline(k)
        assert subtract(err, m).pieces and all(c == 0 for p in subtract(err, m).pieces for c in p.coeffs)


def test_equispaced_float_pointwise(rng):
    k = 4
    err, _ = interpolation_error(KnotConfiguration.equispaced(k), lambda a: monomial(k, a))
    m = periodic_monospline(k)
    with err.arith.ctx():
        for t in rng.random(1000):
            t = Fraction(float(t))
            assert abs(evaluate(err, err.arith.convert(t)) - evaluate(m, t)) < 2.0**-200


def test_cross_basis_agreement(rng):
    for k in range(3, 8):
        for _ in range(100 if k < 5 else 20):
            config = random_config(rng, k)
            f = lambda a: hinge(k, 0.61, a)  # noqa: E731
            a = solve_error(config, f, basis=BasisKind.BSPLINE).interpolant.spline
            b = solve_error(config, f, basis=BasisKind.TRUNCATED_POWER).interpolant.spline
            wide = Arith(max(a.arith.precision, b.arith.precision))
            d = subtract(a.convert(wide), b.convert(wide))
            assert float(sup_norm(d).value) <= 2.0**-80


def test_cross_basis_exact():
    config = KnotConfiguration(3, (Fraction(2, 7), Fraction(5, 9)))
    f = hinge(3, Fraction(1, 2), EXACT)
    a = solve_error(config, f, precision=None, basis=BasisKind.BSPLINE).interpolant.spline
    b = solve_error(config, f, precision=None, basis=BasisKind.TRUNCATED_POWER).interpolant.spline
    assert all(c == 0 for p in subtract(a, b).pieces for c in p.coeffs)


def test_escalation_on_clustered_knots():
    config = KnotConfiguration(8, tuple(float(x) for x in "0.0810 0.1265 0.1360 0.1410 0.1573 0.1680 0.3770 0.3820 0.6975 0.78729 0.78731 0.7879".split()))
    res = solve_error(config, lambda a: monomial(8, a))
    d = res.interpolant.diagnostics
    assert d.escalated
    assert d.precision == "float1024"
    assert d.condition > escalation_threshold(256)


def test_no_escalation_for_benign_knots():
    d = solve_error(KnotConfiguration(3, (0.3, 0.7)), monomial(3, F256)).interpolant.diagnostics
    assert not d.escalated and d.precision == "float256"
    assert d.residual < 1e-70


def test_escalated_data_keeps_working_without_factory():
    config = KnotConfiguration(8, tuple(float(x) for x in "0.0810 0.1265 0.1360 0.1410 0.1573 0.1680 0.3770 0.3820 0.6975 0.78729 0.78731 0.7879".split()))
    res = solve_error(config, monomial(8, F256))
    assert res.error.arith.name == "float1024"


def test_precision_floor():
    with pytest.raises(ValueError):
        solve_error(KnotConfiguration(3, (0.3, 0.7)), monomial(3, Arith(32)), precision=32)


def test_data_validation():
    config = KnotConfiguration(3, (Fraction(1, 3), Fraction(2, 3)))
    with pytest.raises(ConfigurationError):
        HermiteData((0, 1), (0, 1), (0,))
    with pytest.raises(ConfigurationError):
        hermite_interpolate(config, HermiteData((0, Fraction(1, 2), Fraction(2, 3), 1), (0,) * 4, (0,) * 4), precision=None)
    with pytest.raises(ConfigurationError):
        hermite_interpolate(config, HermiteData((0, 1), (0, 1), (0, 1)))
    with pytest.raises(ConfigurationError):
        complete_interpolate(config, CompleteData((0, Fraction(1, 3), Fraction(2, 3), 1), (0,) * 4, (0,), (0,)))


def test_deterministic_solves():
    config = KnotConfiguration(5, (0.1, 0.25, 0.4, 0.6, 0.7, 0.95))
    a = solve_error(config, lambda a: hinge(5, 0.5, a))
    b = solve_error(KnotConfiguration(5, tuple(config.interior)), lambda a: hinge(5, 0.5, a))
    assert a.interpolant.coefficients == b.interpolant.coefficients
    assert a.report.value == b.report.value


def test_perfect_spline_error_below_reported_ceiling(rng):
    for _ in range(100):
        config = random_config(rng, 3)
        assert float(solve_error(config, lambda a: perfect_spline(config, a)).report.value) <= 2.78e-3


def test_quadratic_reproduced_in_float_mode():
    config = KnotConfiguration(3, (0.2, 0.8))
    res = solve_error(config, power(2, F256))
    assert float(res.report.value) < 2.0**-200


def test_diagnostics_serializable():
    import json

    d = solve_error(KnotConfiguration(3, (0.3, 0.7)), monomial(3, F256)).interpolant.diagnostics
    doc = json.loads(json.dumps(d.to_dict()))
    assert doc["basis"] == "bspline" and doc["precision"] == "float256"


def test_hinge_bound_chain_small():
    # |E(t^{k+j})| <= (k+j)!/(j+1)! * sup_u |E(f_u)|, one configuration, coarse u-grid
    k = 3
    rng = np.random.default_rng(5)
    config = random_config(rng, k)
    c = max(
        float(solve_error(config, lambda a, u=u: hinge(k, float(u), a)).report.value)
        for u in np.linspace(0.0005, 0.9995, 200)
    )
    for j in range(k + 1):
        e = float(solve_error(config, power(k + j, F256)).report.value)
        assert e <= factorial(k + j) / factorial(j + 1) * c * (1 + 1e-12)


def test_monospline_below_scaled_perfect_spline(rng):
    for k in (3, 4):
        for _ in range(10):
            config = random_config(rng, k)
            e0 = solve_error(config, lambda a: monomial(k, a)).report.value
            es = solve_error(config, lambda a: perfect_spline(config, a)).report.value
            assert float(e0) <= factorial(2 * k) * float(es) * (1 + 2.0**-40)
