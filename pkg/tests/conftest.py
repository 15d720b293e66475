from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from hermitek.arith import Arith
from hermitek.basis import KnotConfiguration
from hermitek.polyalg import PiecewisePolynomial, Polynomial, binomial_power

EXACT = Arith.exact()
F256 = Arith(256)


def random_config(rng: np.random.Generator, k: int, exact: bool = False, min_gap: float = 0.0) -> KnotConfiguration:
    """Sorted uniform interior knots, optionally as short rationals."""
    m = 2 * k - 4
    while True:
        if exact:
            knots = sorted({Fraction(int(x), 997) for x in rng.integers(1, 997, size=m)})
        else:
            knots = sorted(float(x) for x in rng.random(m))
        if len(knots) != m:
            continue
        s = [0.0] + [float(x) for x in knots] + [1.0]
        if min(b - a for a, b in zip(s, s[1:])) > min_gap:
            return KnotConfiguration(k, tuple(knots))


def integrated_step(breaks, heights, n: int, arith: Arith) -> PiecewisePolynomial:
    """n-fold integral from 0 of the step function with given heights.

    ``breaks`` are the interior jump locations; the result is
    sum_m c_m (t - s_m)_+**n / n! with c_m the jumps (s_0 = 0).
    """
    with arith.ctx():
        one = arith.one
        bp = (arith.zero,) + tuple(arith.convert(b) for b in breaks) + (one,)
        h = [arith.convert(x) for x in heights]
        jumps = [h[0]] + [h[m] - h[m - 1] for m in range(1, len(h))]
        scale = one / factorial(n)
        pieces = []
        for j in range(len(bp) - 1):
            local = [arith.zero] * (n + 1)
            for m in range(j + 1):
                for i, b in enumerate(binomial_power(n, bp[j] - bp[m], one)):
                    local[i] += jumps[m] * b
            pieces.append(Polynomial(tuple(c * scale for c in local)))
    return PiecewisePolynomial(bp, tuple(pieces), n - 1, arith)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
