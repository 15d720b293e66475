"""Closed-form test functions: hinges, monomials, the perfect spline,
Bernoulli numbers and polynomials, and the equispaced periodic monospline."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .arith import Arith
from .basis import KnotConfiguration
from .errors import ConfigurationError, DomainError
from .polyalg import PiecewisePolynomial, Polynomial, binomial_power

EXACT = Arith.exact()


def hinge(k: int, u, arith: Arith | None = None) -> PiecewisePolynomial:
    """f_u(t) = (t - u)_+**(k-1) / (k-1)!, split at u."""
    arith = arith or Arith()
    if k < 3:
        raise ConfigurationError("k must be >= 3")
    with arith.ctx():
        u = arith.convert(u)
        if not 0 < u < 1:
            raise DomainError(f"hinge location u = {u} must lie in (0, 1)")
        zero = arith.zero
        lead = arith.one / factorial(k - 1)
        left = Polynomial((zero,) * k)
        right = Polynomial((zero,) * (k - 1) + (lead,))
        return PiecewisePolynomial((zero, u, arith.one), (left, right), k - 2, arith)


def power(n: int, arith: Arith | None = None) -> PiecewisePolynomial:
    """t**n on a single piece."""
    arith = arith or Arith()
    return PiecewisePolynomial.single([0] * n + [1], arith)


def monomial(k: int, arith: Arith | None = None) -> PiecewisePolynomial:
    """f_0(t) = t**(2k)."""
    return power(2 * k, arith)


def perfect_spline(config: KnotConfiguration, arith: Arith | None = None) -> PiecewisePolynomial:
    """S*(t) = (t**2k + 2 sum_i (-1)**i (t - tau_i)_+**2k) / (2k)!.

    Its 2k-th derivative is (-1)**j on [tau_j, tau_{j+1}).
    """
    arith = arith or Arith()
    n = 2 * config.k
    sites = config.sites(arith)
    with arith.ctx():
        one = arith.one
        scale = one / factorial(n)
        pieces = []
        for j in range(len(sites) - 1):
            local = list(binomial_power(n, sites[j], one))
            for i in range(1, j + 1):
                sign = 2 if i % 2 == 0 else -2
                for m, b in enumerate(binomial_power(n, sites[j] - sites[i], one)):
                    local[m] += sign * b
            pieces.append(Polynomial(tuple(c * scale for c in local)))
    return PiecewisePolynomial(sites, tuple(pieces), n - 1, arith)


# -- Bernoulli ---------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _bernoulli_numbers(n: int) -> tuple:
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(comb(m + 1, j) * b[j] for j in range(m))
        b.append(-s / (m + 1))
    return tuple(b)


def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{j=0}^{m} C(m+1, j) B_j = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _bernoulli_numbers(n)[n]


def bernoulli_polynomial(n: int) -> tuple:
    """Monomial coefficients (constant first) of the Bernoulli polynomial of degree n."""
    b = _bernoulli_numbers(n)
    return tuple(comb(n, i) * b[n - i] for i in range(n + 1))


@dataclass(frozen=True)
class BernoulliTable:
    numbers: tuple
    polynomials: tuple


def bernoulli(n: int) -> BernoulliTable:
    """Numbers B_0..B_n and polynomial coefficient rows of degrees 0..n."""
    return BernoulliTable(_bernoulli_numbers(n), tuple(bernoulli_polynomial(m) for m in range(n + 1)))


def periodic_monospline(k: int, arith: Arith | None = None) -> PiecewisePolynomial:
    """Equispaced interpolation error of t**2k, replicated over 2k-3 cells.

    On [0, h] with h = 1/(2k-3): M(t) = h**2k (B_2k(t/h) - B_2k).
    """
    arith = arith or EXACT
    if k < 3:
        raise ConfigurationError("k must be >= 3")
    n = 2 * k
    cells = 2 * k - 3
    h = Fraction(1, cells)
    poly = list(bernoulli_polynomial(n))
    poly[0] -= bernoulli_number(n)
    # B(t/h) in powers of t, then times h**2k
    base = tuple(c * h**n / h**i for i, c in enumerate(poly))
    with arith.ctx():
        coeffs = tuple(arith.convert(c) for c in base)
        bp = tuple(arith.convert(Fraction(j, cells)) for j in range(cells + 1))
    pieces = (Polynomial(coeffs),) * cells
    return PiecewisePolynomial(bp, pieces, n - 2, arith)


def equispaced_sup(k: int) -> Fraction:
    """2 |(1 - 2**-2k) B_2k| / (2k-3)**2k."""
    n = 2 * k
    return 2 * abs((1 - Fraction(1, 2**n)) * bernoulli_number(n)) / (2 * k - 3) ** n
