"""Piecewise polynomials on [0, 1] in a shifted local monomial basis.

Each piece stores coefficients of ``sum c[i] * (t - b)**i`` where ``b`` is the
left breakpoint of the piece.  Local bases keep clustered breakpoints from
blowing up coefficient magnitudes the way a global monomial expansion would.

All scalars of one object share an :class:`~hermitek.arith.Arith` mode.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Iterable, Sequence

import gmpy2
import numpy as np

from . import roots
from .arith import Arith, check_same_mode, to_string
from .errors import DomainError, NumericError

DEFAULT_TOLERANCE = 2.0**-80


@dataclass(frozen=True)
class Polynomial:
    """Coefficients in a shifted monomial basis; ``degree`` is a bound."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a polynomial needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return roots.horner(self.coeffs, x)

    def derivative(self, order: int = 1) -> "Polynomial":
        c = self.coeffs
        if order > self.degree:
            return Polynomial((c[0] * 0,))
        out = []
        for i in range(order, len(c)):
            out.append(c[i] * (factorial(i) // factorial(i - order)))
        return Polynomial(tuple(out))

    def derivative_at(self, x, order: int):
        if order == 0:
            return self(x)
        return self.derivative(order)(x)

    def shift(self, h) -> "Polynomial":
        """Coefficients of ``x -> p(x + h)``."""
        c = list(self.coeffs)
        n = len(c) - 1
        for i in range(n):
            for j in range(n - 1, i - 1, -1):
                c[j] = c[j] + h * c[j + 1]
        return Polynomial(tuple(c))

    def padded(self, n: int) -> tuple:
        c = self.coeffs
        if len(c) >= n:
            return c
        return c + (c[0] * 0,) * (n - len(c))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(a - b for a, b in zip(self.padded(n), other.padded(n))))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(a + b for a, b in zip(self.padded(n), other.padded(n))))

    def scaled(self, s) -> "Polynomial":
        return Polynomial(tuple(c * s for c in self.coeffs))


def binomial_power(n: int, s, one) -> tuple:
    """Coefficients of ``(x + s)**n`` in powers of x."""
    out = []
    p = one
    powers = [one]
    for _ in range(n):
        p = p * s
        powers.append(p)
    for i in range(n + 1):
        out.append(powers[n - i] * comb(n, i))
    return tuple(out)


@dataclass(frozen=True)
class PiecewisePolynomial:
    breakpoints: tuple
    pieces: tuple
    continuity: int
    arith: Arith = field(default_factory=Arith)

    def __post_init__(self):
        b = self.breakpoints
        if len(b) < 2:
            raise ValueError("need at least two breakpoints")
        if b[0] != 0 or b[-1] != 1:
            raise ValueError("breakpoints must span [0, 1]")
        if any(b[i + 1] <= b[i] for i in range(len(b) - 1)):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.pieces) != len(b) - 1:
            raise ValueError(f"{len(b) - 1} intervals but {len(self.pieces)} pieces")
        if self.continuity < -1:
            raise ValueError("continuity order must be >= -1")

    @classmethod
    def single(cls, coeffs: Iterable, arith: Arith):
        """One polynomial on all of [0, 1] (coefficients about 0)."""
        with arith.ctx():
            c = tuple(arith.convert(x) for x in coeffs)
        return cls((arith.zero, arith.one), (Polynomial(c),), len(c) - 1, arith)

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.pieces)

    @property
    def intervals(self):
        b = self.breakpoints
        return [(b[i], b[i + 1]) for i in range(len(b) - 1)]

    def piece_index(self, t) -> int:
        i = bisect.bisect_right(self.breakpoints, t) - 1
        return min(max(i, 0), len(self.pieces) - 1)

    def convert(self, arith: Arith) -> "PiecewisePolynomial":
        """Re-express every scalar in another mode (lossless when widening)."""
        if arith == self.arith:
            return self
        with arith.ctx():
            bp = tuple(arith.convert(x) for x in self.breakpoints)
            pieces = tuple(Polynomial(tuple(arith.convert(c) for c in p.coeffs)) for p in self.pieces)
        return PiecewisePolynomial(bp, pieces, self.continuity, arith)

    def split(self, t) -> "PiecewisePolynomial":
        """Insert a breakpoint at interior point t without changing the function."""
        with self.arith.ctx():
            t = self.arith.convert(t)
            if not 0 < t < 1:
                raise DomainError("split point must be interior")
            if t in self.breakpoints:
                return self
            i = self.piece_index(t)
            right = self.pieces[i].shift(t - self.breakpoints[i])
            bp = self.breakpoints[: i + 1] + (t,) + self.breakpoints[i + 1 :]
            pieces = self.pieces[: i + 1] + (right,) + self.pieces[i + 1 :]
        return PiecewisePolynomial(bp, pieces, self.continuity, self.arith)

    def continuity_defect(self, order: int):
        """Largest jump of the order-th derivative across interior breakpoints."""
        worst = self.arith.zero
        with self.arith.ctx():
            for i in range(1, len(self.pieces)):
                w = self.breakpoints[i] - self.breakpoints[i - 1]
                left = self.pieces[i - 1].derivative_at(w, order)
                right = self.pieces[i].derivative_at(self.arith.zero, order)
                worst = max(worst, abs(left - right))
        return worst


def evaluate(pp: PiecewisePolynomial, t, derivative_order: int = 0):
    """Value (or derivative) of pp at t; right-continuous at breakpoints."""
    if derivative_order < 0:
        raise ValueError("derivative order must be nonnegative")
    with pp.arith.ctx():
        t = pp.arith.convert(t)
        if t < 0 or t > 1:
            raise DomainError(f"t = {t} lies outside [0, 1]")
        i = pp.piece_index(t)
        return pp.pieces[i].derivative_at(t - pp.breakpoints[i], derivative_order)


def _merge_breakpoints(a: Sequence, b: Sequence, arith: Arith) -> tuple:
    merged = sorted(set(a) | set(b))
    if arith.is_exact:
        return tuple(merged)
    gap = arith.convert(2) ** (-(arith.precision // 2))
    out = [merged[0]]
    for x in merged[1:-1]:
        if x - out[-1] >= gap:
            out.append(x)
    if merged[-1] - out[-1] < gap and len(out) > 1:
        out.pop()
    out.append(merged[-1])
    return tuple(out)


def _restrict(pp: PiecewisePolynomial, lo, hi) -> Polynomial:
    i = pp.piece_index((lo + hi) / 2)
    h = lo - pp.breakpoints[i]
    p = pp.pieces[i]
    return p if h == 0 else p.shift(h)


def _combine(a: PiecewisePolynomial, b: PiecewisePolynomial, op) -> PiecewisePolynomial:
    arith = check_same_mode(a.arith, b.arith)
    with arith.ctx():
        bp = _merge_breakpoints(a.breakpoints, b.breakpoints, arith)
        pieces = []
        for lo, hi in zip(bp[:-1], bp[1:]):
            pieces.append(op(_restrict(a, lo, hi), _restrict(b, lo, hi)))
    return PiecewisePolynomial(bp, tuple(pieces), min(a.continuity, b.continuity), arith)


def subtract(a: PiecewisePolynomial, b: PiecewisePolynomial) -> PiecewisePolynomial:
    """a - b on the union of both breakpoint sets."""
    return _combine(a, b, lambda p, q: p - q)


def add(a: PiecewisePolynomial, b: PiecewisePolynomial) -> PiecewisePolynomial:
    return _combine(a, b, lambda p, q: p + q)


def scale(pp: PiecewisePolynomial, s) -> PiecewisePolynomial:
    with pp.arith.ctx():
        s = pp.arith.convert(s)
        pieces = tuple(p.scaled(s) for p in pp.pieces)
    return PiecewisePolynomial(pp.breakpoints, pieces, pp.continuity, pp.arith)


def differentiate(pp: PiecewisePolynomial, order: int = 1) -> PiecewisePolynomial:
    if order < 1:
        raise ValueError("order must be >= 1")
    if order > pp.degree + 1:
        raise ValueError(f"order {order} exceeds degree bound + 1 = {pp.degree + 1}")
    with pp.arith.ctx():
        pieces = tuple(p.derivative(order) for p in pp.pieces)
    return PiecewisePolynomial(pp.breakpoints, pieces, max(pp.continuity - order, -1), pp.arith)


@dataclass(frozen=True)
class Extremum:
    lo: object
    hi: object
    value: object

    @property
    def location(self):
        return (self.lo + self.hi) / 2


@dataclass(frozen=True)
class SupNormReport:
    """Certified sup-norm of a piecewise polynomial on [0, 1].

    ``extrema`` holds the interior critical points (roots of the derivative)
    with signed function values; ``value`` is the largest absolute value over
    those and all piece endpoints.
    """

    value: object
    argmax: object
    extrema: tuple
    certified: bool

    def __float__(self):
        return float(self.value)


def _check_finite(pp: PiecewisePolynomial):
    if pp.arith.is_exact:
        return
    for p in pp.pieces:
        for c in p.coeffs:
            if not gmpy2.is_finite(c):
                raise NumericError("non-finite coefficient in piecewise polynomial")


def sup_norm(pp: PiecewisePolynomial, tolerance=DEFAULT_TOLERANCE) -> SupNormReport:
    """max |pp(t)| over [0, 1], via root isolation of each piece's derivative.

    Critical points are enclosed in intervals of width <= tolerance; the
    function is evaluated at the enclosure midpoint (or at the exact root
    when one is found).
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    _check_finite(pp)
    arith = pp.arith
    with arith.ctx():
        best = None
        argmax = None
        extrema = []
        certified = True
        for (a, b), p in zip(pp.intervals, pp.pieces):
            w = b - a
            for x in (arith.zero, w):
                v = abs(p(x))
                if best is None or v > best:
                    best, argmax = v, a + x
            if p.degree < 2:
                continue
            d = p.derivative(1)
            encl, ok = roots.isolate(list(d.coeffs), a, b, tolerance, arith.is_exact)
            certified = certified and ok
            for r in encl:
                v = p(r.mid - a)
                extrema.append(Extremum(r.lo, r.hi, v))
                if abs(v) > best:
                    best, argmax = abs(v), r.mid
    return SupNormReport(best, argmax, tuple(extrema), certified)


def grid_sup(pp: PiecewisePolynomial, n: int = 10**6) -> tuple[float, float]:
    """Dense-grid maximum of |pp| in double precision: (value, location).

    Only meant as an independent cross-check of :func:`sup_norm`.
    """
    t = np.linspace(0.0, 1.0, n + 1)
    bp = np.array([float(x) for x in pp.breakpoints])
    idx = np.clip(np.searchsorted(bp, t, side="right") - 1, 0, len(pp.pieces) - 1)
    vals = np.empty_like(t)
    for i, p in enumerate(pp.pieces):
        mask = idx == i
        x = t[mask] - bp[i]
        c = [float(v) for v in p.coeffs]
        vals[mask] = np.polynomial.polynomial.polyval(x, c)
    j = int(np.argmax(np.abs(vals)))
    return float(abs(vals[j])), float(t[j])


# -- serialization -------------------------------------------------------

def to_json(pp: PiecewisePolynomial) -> dict:
    return {
        "breakpoints": [to_string(x) for x in pp.breakpoints],
        "pieces": [[to_string(c) for c in p.coeffs] for p in pp.pieces],
        "continuity": pp.continuity,
        "mode": pp.arith.name,
    }


def from_json(doc: dict) -> PiecewisePolynomial:
    arith = Arith.from_name(doc["mode"])
    with arith.ctx():
        bp = tuple(arith.convert(x) for x in doc["breakpoints"])
        pieces = tuple(Polynomial(tuple(arith.convert(c) for c in row)) for row in doc["pieces"])
    return PiecewisePolynomial(bp, pieces, int(doc["continuity"]), arith)


def dumps(pp: PiecewisePolynomial, **kw) -> str:
    return json.dumps(to_json(pp), **kw)


def loads(text: str) -> PiecewisePolynomial:
    return from_json(json.loads(text))
