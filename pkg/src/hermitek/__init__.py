"""Hermite interpolation by odd-degree splines, in exact or extended precision."""

from .arith import Arith, to_decimal
from .basis import BasisKind, BasisSpec, KnotConfiguration, basis_eval, collocation_matrix, complete_matrix
from .canon import (
    bernoulli,
    bernoulli_number,
    bernoulli_polynomial,
    equispaced_sup,
    hinge,
    monomial,
    perfect_spline,
    periodic_monospline,
)
from .errors import (
    ConfigurationError,
    DomainError,
    HermitekError,
    IllConditionedError,
    ModeError,
    NumericError,
)
from .interpolate import (
    CompleteData,
    HermiteData,
    Mode,
    complete_interpolate,
    hermite_interpolate,
    interpolation_error,
    solve_error,
)
from .mc import Experiment, McPlan, McSummary, isolate_worst, run_mc, summarize
from .polyalg import PiecewisePolynomial, Polynomial, differentiate, evaluate, sup_norm

__version__ = "0.1.0"
