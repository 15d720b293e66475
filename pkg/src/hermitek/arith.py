"""Scalar arithmetic modes.

Two modes are supported: exact rationals (``gmpy2.mpq``) and binary floats
with a fixed mantissa length (``gmpy2.mpfr``).  An :class:`Arith` value
describes the mode; every scalar produced by the package is created through
:meth:`Arith.convert` so that all operands of one computation share a mode.

mpfr arithmetic rounds to the precision of the *active* gmpy2 context, so
float-mode computations must run inside ``with arith.ctx():``.  gmpy2
contexts are thread-local.
"""

from __future__ import annotations

import contextlib
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import ModeError, NumericError

DEFAULT_PRECISION = 256

_FLOAT_NAME = re.compile(r"^float(\d+)$")


@dataclass(frozen=True)
class Arith:
    """Arithmetic mode: ``precision=None`` means exact rationals."""

    precision: int | None = DEFAULT_PRECISION

    def __post_init__(self):
        if self.precision is not None and self.precision < 2:
            raise ValueError(f"precision must be >= 2 bits, got {self.precision}")

    @classmethod
    def exact(cls) -> "Arith":
        return cls(None)

    @classmethod
    def resolve(cls, spec: "PrecisionLike") -> "Arith":
        """Accept an Arith, a bit count, None/"rational" (exact) or a mode name."""
        if isinstance(spec, Arith):
            return spec
        if spec is None:
            return cls(None)
        if isinstance(spec, str):
            return cls.from_name(spec)
        return cls(int(spec))

    @classmethod
    def from_name(cls, name: str) -> "Arith":
        if name in ("rational", "exact"):
            return cls(None)
        m = _FLOAT_NAME.match(name)
        if m is None:
            raise ValueError(f"unknown arithmetic mode {name!r}")
        return cls(int(m.group(1)))

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    @property
    def name(self) -> str:
        return "rational" if self.precision is None else f"float{self.precision}"

    def ctx(self):
        if self.precision is None:
            return contextlib.nullcontext()
        return gmpy2.context(precision=self.precision)

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def convert(self, x: Any):
        """Bring a number (int, float, Fraction, str, mpq, mpfr) into this mode.

        Floats convert exactly in rational mode.  Strings may be decimals or
        ``p/q`` fractions.
        """
        if self.precision is None:
            if isinstance(x, type(mpq())):
                return x
            if isinstance(x, type(mpfr())):
                if not gmpy2.is_finite(x):
                    raise NumericError(f"cannot represent {x} exactly")
                return mpq(x)
            if isinstance(x, float):
                if not math.isfinite(x):
                    raise NumericError(f"cannot represent {x} exactly")
                return mpq(*x.as_integer_ratio())
            if isinstance(x, str):
                return mpq(Fraction(x))
            return mpq(x)
        if isinstance(x, str) and "/" in x:
            x = mpq(Fraction(x))
        return mpfr(x, self.precision)

    def to_float(self, x) -> float:
        return float(x)

    def eps(self):
        """Unit roundoff of the mode (zero when exact)."""
        if self.precision is None:
            return self.zero
        return self.convert(2) ** (-self.precision)


PrecisionLike = Union[Arith, int, str, None]


def mode_of(x) -> Arith:
    """Infer the arithmetic mode of a scalar produced by :class:`Arith`."""
    if isinstance(x, type(mpq())):
        return Arith(None)
    if isinstance(x, type(mpfr())):
        return Arith(x.precision)
    raise ModeError(f"scalar of type {type(x).__name__} has no arithmetic mode")


def check_same_mode(*modes: Arith) -> Arith:
    first = modes[0]
    for m in modes[1:]:
        if m != first:
            raise ModeError(f"mixed arithmetic modes: {first.name} vs {m.name}")
    return first


def to_string(x) -> str:
    """Full-precision string: ``p/q`` for rationals, round-trip decimal for floats."""
    if isinstance(x, type(mpq())):
        return str(x)
    if isinstance(x, type(mpfr())):
        # gmpy2's str() emits enough digits to round-trip at the value's precision
        return str(x)
    return str(x)


def to_decimal(x, digits: int = 20) -> str:
    """Human-readable decimal with ``digits`` significant digits."""
    if isinstance(x, type(mpq())):
        with gmpy2.context(precision=max(64, int(digits * 3.33) + 16)):
            x = mpfr(x)
    if isinstance(x, type(mpfr())):
        return format(x, f".{digits}g")
    return format(float(x), f".{digits}g")
