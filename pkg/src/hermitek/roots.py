"""Real root isolation for polynomials on a bounded interval.

Roots are isolated with Descartes' rule of signs applied to Bernstein
coefficients (sign variations bound the number of roots in the open
interval), subdividing by de Casteljau at the midpoint until each
subinterval has zero or one variation.  Single-root brackets are then
bisected and snapped onto a dyadic grid of absolute width ``2**-K``, so the
resulting enclosure does not depend on how the interval was obtained.

Polynomials enter as coefficient sequences in the shifted basis
``sum c[i] * (t - a)**i``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from math import comb

import gmpy2
from gmpy2 import mpq


@dataclass(frozen=True)
class RootEnclosure:
    lo: object
    hi: object
    # exact root location when one was hit (rational mode or a grid point)
    point: object = None

    @property
    def mid(self):
        if self.point is not None:
            return self.point
        return (self.lo + self.hi) / 2


def horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


@functools.lru_cache(maxsize=None)
def _bernstein_weights(n):
    return tuple(tuple(mpq(comb(j, i), comb(n, i)) for i in range(j + 1)) for j in range(n + 1))


def to_bernstein(coeffs, width):
    """Bernstein coefficients on [a, a + width] of ``sum c[i] (t-a)**i``."""
    n = len(coeffs) - 1
    scaled = []
    w = 1
    for c in coeffs:
        scaled.append(c * w)
        w = w * width
    out = []
    for row in _bernstein_weights(n):
        acc = scaled[0] * row[0]
        for i in range(1, len(row)):
            acc += scaled[i] * row[i]
        out.append(acc)
    return out


def split_half(b):
    """de Casteljau subdivision at 1/2; returns (left, right) coefficients."""
    n = len(b) - 1
    work = list(b)
    left = [work[0]]
    right = [work[n]]
    for r in range(1, n + 1):
        for i in range(n - r + 1):
            work[i] = (work[i] + work[i + 1]) / 2
        left.append(work[0])
        right.append(work[n - r])
    right.reverse()
    return left, right


def _signs(b, floor):
    return [0 if abs(c) <= floor else (1 if c > 0 else -1) for c in b]


def _variations(signs):
    v = 0
    last = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def _first_nonzero(signs):
    for s in signs:
        if s:
            return s
    return 0


def simplest_rational(lo, hi):
    """Rational of smallest denominator in [lo, hi] (0 <= lo <= hi)."""
    if lo <= 0 <= hi:
        return mpq(0)
    n = mpq(-_floor(-lo))
    if n <= hi:
        return n
    n = mpq(_floor(lo))
    return n + 1 / simplest_rational(1 / (hi - n), 1 / (lo - n))


def _floor(x) -> int:
    # gmpy2.floor on an mpq rounds through a 53-bit mpfr; stay in integers
    if isinstance(x, type(mpq())):
        return x.numerator // x.denominator
    return int(gmpy2.floor(x))


def grid_exponent(tol) -> int:
    return max(1, math.ceil(-math.log2(float(tol))))


def isolate(coeffs, a, b, tol, exact: bool, floor=None):
    """Enclose every real root of the polynomial in the open interval (a, b).

    Returns ``(enclosures, certified)``.  Each enclosure has width at most
    ``2**-K <= tol``.  ``certified`` is False when some cluster could not be
    separated down to the grid width (a root of multiplicity > 1 or
    coefficients below the noise floor).  ``floor`` is the magnitude below
    which Bernstein coefficients and values count as zero; it defaults to 0
    in exact mode and to a precision-relative level otherwise.
    """
    zero = coeffs[0] * 0
    width = b - a
    bern = to_bernstein(coeffs, width)
    if floor is None:
        if exact:
            floor = zero
        else:
            prec = gmpy2.get_context().precision
            scale = max(abs(c) for c in bern)
            floor = scale * gmpy2.mpfr(2) ** (-(prec - prec // 8))
    K = grid_exponent(tol)
    grid = mpq(1, 2**K) if exact else gmpy2.mpfr(2) ** (-K)

    out = []
    certified = True
    stack = [(a, b, bern)]
    while stack:
        lo, hi, bb = stack.pop()
        signs = _signs(bb, floor)
        v = _variations(signs)
        if v == 0:
            continue
        if v == 1:
            s_lo = _first_nonzero(signs)
            out.append(_refine(coeffs, a, lo, hi, s_lo, grid, K, floor, exact))
            continue
        if hi - lo <= grid:
            certified = False
            out.append(RootEnclosure(lo, hi))
            continue
        mid = (lo + hi) / 2
        left, right = split_half(bb)
        if abs(left[-1]) <= floor:
            out.append(RootEnclosure(mid, mid, mid))
        stack.append((mid, hi, right))
        stack.append((lo, mid, left))
    out.sort(key=lambda r: r.lo)
    return out, certified


def _refine(coeffs, a, lo, hi, s_lo, grid, K, floor, exact):
    """Bisect a single-root bracket; ``s_lo`` is the sign just right of ``lo``."""
    while hi - lo > grid:
        mid = (lo + hi) / 2
        v = horner(coeffs, mid - a)
        if abs(v) <= floor:
            return RootEnclosure(mid, mid, mid)
        if (v > 0) == (s_lo > 0):
            lo = mid
        else:
            hi = mid
    if exact:
        r = simplest_rational(lo, hi)
        if horner(coeffs, r - a) == 0:
            return RootEnclosure(r, r, r)
    scale = 2**K
    m = _floor(lo * scale)
    c0 = grid * m
    c1 = c0 + grid
    if c1 >= hi:
        return RootEnclosure(c0, c1)
    v = horner(coeffs, c1 - a)
    if abs(v) <= floor:
        return RootEnclosure(c1, c1, c1)
    if (v > 0) == (s_lo > 0):
        return RootEnclosure(c1, c1 + grid)
    return RootEnclosure(c0, c1)
