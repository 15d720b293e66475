"""Knot configurations and the two bases of the interpolating spline space.

The space is splines of degree 2k-1 with simple knots tau_1..tau_{2k-4} on
[0, 1], dimension 4k-4.  It is spanned either by B-splines over the clamped
knot vector (2k-fold end knots) or by the truncated powers
``1, t, ..., t**(2k-1), (t - tau_i)_+**(2k-1)``.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .arith import Arith
from .errors import ConfigurationError, DomainError
from .polyalg import PiecewisePolynomial, Polynomial, binomial_power


@dataclass(frozen=True)
class KnotConfiguration:
    """Order parameter k and interior knots 0 < tau_1 < ... < tau_{2k-4} < 1.

    Knots are kept exactly as given (floats, Fractions, strings or gmpy2
    scalars) and converted to the working mode on demand.
    """

    k: int
    interior: tuple

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 3:
            raise ConfigurationError(f"k must be an integer >= 3, got {self.k}")
        interior = tuple(self.interior)
        object.__setattr__(self, "interior", interior)
        if len(interior) != 2 * self.k - 4:
            raise ConfigurationError(
                f"k={self.k} needs {2 * self.k - 4} interior knots, got {len(interior)}"
            )
        exact = Arith.exact()
        q = [exact.convert(x) for x in interior]
        if q and (q[0] <= 0 or q[-1] >= 1):
            raise ConfigurationError("interior knots must lie in the open interval (0, 1)")
        for a, b in zip(q, q[1:]):
            if b <= a:
                raise ConfigurationError("interior knots must be strictly increasing")

    @classmethod
    def equispaced(cls, k: int) -> "KnotConfiguration":
        m = 2 * k - 3
        return cls(k, tuple(Fraction(j, m) for j in range(1, m)))

    @property
    def degree(self) -> int:
        return 2 * self.k - 1

    @property
    def dimension(self) -> int:
        return 4 * self.k - 4

    def sites(self, arith: Arith) -> tuple:
        """tau_0 = 0, interior knots, tau_{2k-3} = 1, converted to ``arith``."""
        with arith.ctx():
            return (arith.zero,) + tuple(arith.convert(x) for x in self.interior) + (arith.one,)

    def mesh(self) -> float:
        """Largest gap between successive sites."""
        s = [0.0] + [float(x) for x in self.interior] + [1.0]
        return max(b - a for a, b in zip(s, s[1:]))

    def as_floats(self) -> list[float]:
        return [float(x) for x in self.interior]


class BasisKind(enum.Enum):
    BSPLINE = "bspline"
    TRUNCATED_POWER = "truncated_power"


@dataclass(frozen=True)
class BasisSpec:
    kind: BasisKind
    config: KnotConfiguration

    @property
    def size(self) -> int:
        return self.config.dimension

    @property
    def degree(self) -> int:
        return self.config.degree

    def extended_knots(self, arith: Arith) -> tuple | None:
        if self.kind is not BasisKind.BSPLINE:
            return None
        d = self.degree
        sites = self.config.sites(arith)
        return (sites[0],) * (d + 1) + sites[1:-1] + (sites[-1],) * (d + 1)


# -- B-splines -------------------------------------------------------------

def _span(knots, degree: int, n_basis: int, t) -> int:
    """Index i with knots[i] <= t < knots[i+1]; the last span at t = 1."""
    if t >= knots[n_basis]:
        return n_basis - 1
    lo, hi = degree, n_basis
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if t < knots[mid]:
            hi = mid
        else:
            lo = mid
    return lo


def bspline_derivatives(knots, degree: int, span: int, t, nderiv: int, zero, one):
    """Derivatives 0..nderiv of the degree+1 B-splines active on ``span``.

    Returns ``ders[r][j]`` for basis index ``span - degree + j``.  This is
    the standard triangular recursion for basis functions and their
    derivatives (Piegl and Tiller, algorithm A2.3).
    """
    p = degree
    ndu = [[zero] * (p + 1) for _ in range(p + 1)]
    ndu[0][0] = one
    left = [zero] * (p + 1)
    right = [zero] * (p + 1)
    for j in range(1, p + 1):
        left[j] = t - knots[span + 1 - j]
        right[j] = knots[span + j] - t
        saved = zero
        for r in range(j):
            ndu[j][r] = right[r + 1] + left[j - r]
            temp = ndu[r][j - 1] / ndu[j][r]
            ndu[r][j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j][j] = saved

    n = min(nderiv, p)
    ders = [[zero] * (p + 1) for _ in range(nderiv + 1)]
    for j in range(p + 1):
        ders[0][j] = ndu[j][p]
    a = [[zero] * (p + 1) for _ in range(2)]
    for r in range(p + 1):
        s1, s2 = 0, 1
        a[0][0] = one
        for k in range(1, n + 1):
            d = zero
            rk = r - k
            pk = p - k
            if r >= k:
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk]
                d = a[s2][0] * ndu[rk][pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j]
                d += a[s2][j] * ndu[rk + j][pk]
            if r <= pk:
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r]
                d += a[s2][k] * ndu[r][pk]
            ders[k][r] = d
            s1, s2 = s2, s1
    fac = p
    for k in range(1, n + 1):
        for j in range(p + 1):
            ders[k][j] *= fac
        fac *= p - k
    return ders


# -- truncated powers ------------------------------------------------------

def _falling(n: int, r: int) -> int:
    return factorial(n) // factorial(n - r) if r <= n else 0


def _truncated_power_row(sites, degree: int, t, order: int, zero, one):
    """All truncated-power basis derivatives of the given order at t."""
    row = []
    for i in range(degree + 1):
        if i < order:
            row.append(zero)
        else:
            row.append(t ** (i - order) * _falling(i, order) if i > order else one * _falling(i, order))
    for tau in sites[1:-1]:
        if t < tau or order > degree:
            row.append(zero)
        else:
            e = degree - order
            row.append((t - tau) ** e * _falling(degree, order) if e > 0 else one * _falling(degree, order))
    return row


# -- public operations ------------------------------------------------------

def _check_t(t):
    if t < 0 or t > 1:
        raise DomainError(f"t = {t} lies outside [0, 1]")


def basis_row(spec: BasisSpec, t, derivative_order: int, arith: Arith) -> list:
    """Values of every basis function's derivative of the given order at t."""
    with arith.ctx():
        t = arith.convert(t)
        _check_t(t)
        zero, one = arith.zero, arith.one
        if spec.kind is BasisKind.TRUNCATED_POWER:
            return _truncated_power_row(spec.config.sites(arith), spec.degree, t, derivative_order, zero, one)
        knots = spec.extended_knots(arith)
        p = spec.degree
        span = _span(knots, p, spec.size, t)
        row = [zero] * spec.size
        if derivative_order > p:
            return row
        ders = bspline_derivatives(knots, p, span, t, derivative_order, zero, one)
        for j in range(p + 1):
            row[span - p + j] = ders[derivative_order][j]
        return row


def basis_eval(spec: BasisSpec, index: int, t, derivative_order: int = 0, arith: Arith | None = None):
    arith = arith or Arith()
    if not 0 <= index < spec.size:
        raise IndexError(f"basis index {index} out of range 0..{spec.size - 1}")
    return basis_row(spec, t, derivative_order, arith)[index]


def collocation_matrix(spec: BasisSpec, arith: Arith | None = None) -> list:
    """Hermite collocation matrix: row 2i = values at tau_i, row 2i+1 = slopes."""
    arith = arith or Arith()
    rows = []
    for s in spec.config.sites(arith):
        rows.append(basis_row(spec, s, 0, arith))
        rows.append(basis_row(spec, s, 1, arith))
    return rows


def complete_matrix(spec: BasisSpec, arith: Arith | None = None) -> list:
    """Rows for complete-spline conditions.

    Order: value and derivatives 1..k-1 at tau_0, values at the interior
    knots, value and derivatives 1..k-1 at tau_{2k-3}.
    """
    arith = arith or Arith()
    k = spec.config.k
    sites = spec.config.sites(arith)
    rows = [basis_row(spec, sites[0], r, arith) for r in range(k)]
    rows += [basis_row(spec, s, 0, arith) for s in sites[1:-1]]
    rows += [basis_row(spec, sites[-1], r, arith) for r in range(k)]
    return rows


@functools.lru_cache(maxsize=64)
def _left_derivatives(spec: BasisSpec, arith: Arith) -> tuple:
    """All derivatives of the active B-splines at each piece's left end."""
    p = spec.degree
    with arith.ctx():
        knots = spec.extended_knots(arith)
        sites = spec.config.sites(arith)
        return tuple(
            bspline_derivatives(knots, p, p + j, sites[j], p, arith.zero, arith.one) for j in range(len(sites) - 1)
        )


def spline_from_coefficients(spec: BasisSpec, coeffs: Sequence, arith: Arith) -> PiecewisePolynomial:
    """Convert basis coefficients to the local-monomial piecewise form."""
    p = spec.degree
    with arith.ctx():
        zero, one = arith.zero, arith.one
        coeffs = [arith.convert(c) for c in coeffs]
        sites = spec.config.sites(arith)
        inv_fact = [arith.convert(1) / factorial(r) for r in range(p + 1)]
        pieces = []
        if spec.kind is BasisKind.BSPLINE:
            local_ders = _left_derivatives(spec, arith)
            for j in range(len(sites) - 1):
                ders = local_ders[j]
                active = coeffs[j : j + p + 1]
                local = []
                for r in range(p + 1):
                    acc = zero
                    for c, d in zip(active, ders[r]):
                        acc += c * d
                    local.append(acc * inv_fact[r])
                pieces.append(Polynomial(tuple(local)))
        else:
            poly = Polynomial(tuple(coeffs[: p + 1]))
            hinge = coeffs[p + 1 :]
            for j in range(len(sites) - 1):
                local = list(poly.shift(sites[j]).coeffs)
                for m in range(1, j + 1):
                    d = hinge[m - 1]
                    for i, b in enumerate(binomial_power(p, sites[j] - sites[m], one)):
                        local[i] += d * b
                pieces.append(Polynomial(tuple(local)))
    return PiecewisePolynomial(sites, tuple(pieces), p - 1, arith)


def matrix_to_csv(rows, path) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in rows:
            w.writerow([str(x) for x in row])
