"""Hermite interpolation by odd-degree splines, and the complete spline.

``hermite_interpolate`` returns the spline s of degree 2k-1 with simple knots
tau_1..tau_{2k-4} such that s(tau_i) = f(tau_i) and s'(tau_i) = f'(tau_i) at
all 2k-2 sites.  ``complete_interpolate`` matches values at all sites and
derivatives of orders 1..k-1 at both ends.  Both systems have 4k-4 rows.

Float-mode solves whose condition estimate exceeds ``2**(p/4)`` (or which hit
a numerically zero pivot) are repeated at :data:`ESCALATED_PRECISION` bits.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple, Sequence

from .arith import Arith, PrecisionLike, mode_of
from .basis import BasisKind, BasisSpec, KnotConfiguration, collocation_matrix, complete_matrix, spline_from_coefficients
from .errors import ConfigurationError, IllConditionedError, ModeError
from .linalg import condition_estimate, lu_factor, matvec
from .polyalg import DEFAULT_TOLERANCE, PiecewisePolynomial, SupNormReport, evaluate, subtract, sup_norm

ESCALATED_PRECISION = 1024
MIN_PRECISION = 64


class Mode(enum.Enum):
    HERMITE = "hermite"
    COMPLETE = "complete"


@dataclass(frozen=True)
class HermiteData:
    sites: tuple
    values: tuple
    slopes: tuple

    def __post_init__(self):
        if not len(self.sites) == len(self.values) == len(self.slopes):
            raise ConfigurationError("sites, values and slopes must have equal length")

    @classmethod
    def from_function(cls, config: KnotConfiguration, f: PiecewisePolynomial) -> "HermiteData":
        sites = config.sites(f.arith)
        return cls(sites, tuple(evaluate(f, s) for s in sites), tuple(evaluate(f, s, 1) for s in sites))


@dataclass(frozen=True)
class CompleteData:
    sites: tuple
    values: tuple
    left_derivs: tuple
    right_derivs: tuple

    def __post_init__(self):
        if len(self.values) != len(self.sites):
            raise ConfigurationError("one value per site is required")
        if len(self.left_derivs) != len(self.right_derivs):
            raise ConfigurationError("left and right derivative counts differ")

    @classmethod
    def from_function(cls, config: KnotConfiguration, f: PiecewisePolynomial) -> "CompleteData":
        sites = config.sites(f.arith)
        k = config.k
        return cls(
            sites,
            tuple(evaluate(f, s) for s in sites),
            tuple(evaluate(f, sites[0], r) for r in range(1, k)),
            tuple(evaluate(f, sites[-1], r) for r in range(1, k)),
        )


@dataclass(frozen=True)
class SolveDiagnostics:
    basis: str
    condition: float
    residual: float
    precision: str
    escalated: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Interpolant:
    spline: PiecewisePolynomial
    coefficients: tuple
    diagnostics: SolveDiagnostics


def escalation_threshold(precision: int) -> float:
    return 2.0 ** (precision / 4)


def _check_sites(config: KnotConfiguration, sites: Sequence):
    try:
        arith = mode_of(sites[0])
    except ModeError:
        arith = Arith.exact()
    expected = config.sites(arith)
    if len(sites) != len(expected):
        raise ConfigurationError(f"expected {len(expected)} sites, got {len(sites)}")
    with arith.ctx():
        for s, e in zip(sites, expected):
            if arith.convert(s) != e:
                raise ConfigurationError("data sites do not match the knot configuration")


@functools.lru_cache(maxsize=64)
def _factored(config, rows_fn: Callable, basis: BasisKind, arith: Arith):
    """Matrix, factorization and condition estimate, shared by all right-hand sides."""
    spec = BasisSpec(basis, config)
    with arith.ctx():
        a = rows_fn(spec, arith)
        lu = lu_factor(a, arith.is_exact, arith.precision)
        cond = condition_estimate(a, lu, arith.one)
    return spec, a, lu, cond


def _attempt(config, rows_fn: Callable, rhs: Sequence, basis: BasisKind, arith: Arith) -> Interpolant:
    spec, a, lu, cond = _factored(config, rows_fn, basis, arith)
    with arith.ctx():
        b = [arith.convert(v) for v in rhs]
        x = lu.solve(b)
        residual = max(float(abs(u - v)) for u, v in zip(matvec(a, x), b))
    spline = spline_from_coefficients(spec, x, arith)
    diag = SolveDiagnostics(basis.value, cond, residual, arith.name)
    return Interpolant(spline, tuple(x), diag)


def _solve(config, rows_fn, rhs, basis, precision) -> Interpolant:
    arith = Arith.resolve(precision)
    if not arith.is_exact and arith.precision < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits")
    can_escalate = not arith.is_exact and arith.precision < ESCALATED_PRECISION
    try:
        res = _attempt(config, rows_fn, rhs, basis, arith)
    except IllConditionedError:
        if not can_escalate:
            raise
        res = None
    if res is not None and not (can_escalate and res.diagnostics.condition > escalation_threshold(arith.precision)):
        return res
    high = Arith(ESCALATED_PRECISION)
    try:
        res = _attempt(config, rows_fn, rhs, basis, high)
    except IllConditionedError as exc:
        exc.precision = high.name
        raise
    d = res.diagnostics
    return Interpolant(res.spline, res.coefficients, SolveDiagnostics(d.basis, d.condition, d.residual, d.precision, True))


def hermite_interpolate(
    config: KnotConfiguration,
    data: HermiteData,
    basis: BasisKind = BasisKind.BSPLINE,
    precision: PrecisionLike = 256,
) -> Interpolant:
    _check_sites(config, data.sites)
    rhs = []
    for v, s in zip(data.values, data.slopes):
        rhs += [v, s]
    return _solve(config, collocation_matrix, rhs, basis, precision)


def complete_interpolate(
    config: KnotConfiguration,
    data: CompleteData,
    basis: BasisKind = BasisKind.BSPLINE,
    precision: PrecisionLike = 256,
) -> Interpolant:
    _check_sites(config, data.sites)
    if len(data.left_derivs) != config.k - 1:
        raise ConfigurationError(f"complete data needs derivatives of orders 1..{config.k - 1}")
    rhs = [data.values[0], *data.left_derivs, *data.values[1:-1], data.values[-1], *data.right_derivs]
    return _solve(config, complete_matrix, rhs, basis, precision)


class ErrorResult(NamedTuple):
    error: PiecewisePolynomial
    report: SupNormReport
    interpolant: Interpolant


def solve_error(
    config: KnotConfiguration,
    f: PiecewisePolynomial | Callable[[Arith], PiecewisePolynomial],
    mode: Mode | str = Mode.HERMITE,
    precision: PrecisionLike = 256,
    basis: BasisKind = BasisKind.BSPLINE,
    tolerance=DEFAULT_TOLERANCE,
) -> ErrorResult:
    """Interpolate f, and return f - interpolant with its sup-norm report.

    ``f`` may also be a factory ``arith -> PiecewisePolynomial``; it is then
    rebuilt natively if the solve escalates precision, instead of widening a
    low-precision copy whose breakpoints were rounded at the lower precision.
    """
    mode = Mode(mode)
    arith = Arith.resolve(precision)

    def build(a: Arith) -> PiecewisePolynomial:
        return f(a) if callable(f) else f.convert(a)

    def run(g: PiecewisePolynomial, a: Arith) -> Interpolant:
        if mode is Mode.HERMITE:
            return hermite_interpolate(config, HermiteData.from_function(config, g), basis, a)
        return complete_interpolate(config, CompleteData.from_function(config, g), basis, a)

    g = build(arith)
    interp = run(g, arith)
    high = interp.spline.arith
    if high != arith:
        g = build(high)
        if callable(f):
            rerun = run(g, high)
            d = rerun.diagnostics
            interp = Interpolant(rerun.spline, rerun.coefficients, SolveDiagnostics(d.basis, d.condition, d.residual, d.precision, True))
    err = subtract(g, interp.spline)
    return ErrorResult(err, sup_norm(err, tolerance), interp)


def interpolation_error(
    config: KnotConfiguration,
    f: PiecewisePolynomial | Callable[[Arith], PiecewisePolynomial],
    mode: Mode | str = Mode.HERMITE,
    precision: PrecisionLike = 256,
    basis: BasisKind = BasisKind.BSPLINE,
) -> tuple[PiecewisePolynomial, SupNormReport]:
    res = solve_error(config, f, mode, precision, basis)
    return res.error, res.report
