"""Seeded Monte Carlo studies of the Hermite interpolation error.

Each replication r draws its uniforms from a Philox stream keyed by
``SeedSequence(seed, spawn_key=(r,))``, so results do not depend on the
order or the process in which replications run.
"""

from __future__ import annotations

import csv
import enum
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .basis import BasisKind, KnotConfiguration
from .canon import equispaced_sup, hinge, monomial, perfect_spline
from .errors import ConfigurationError, HermitekError
from .interpolate import ESCALATED_PRECISION, Mode, solve_error

CLOSE_KNOT_GAP = 1e-2


class Experiment(enum.Enum):
    HINGE = "hinge"
    PERFECT_SPLINE = "perfect_spline"
    MONOSPLINE_HERMITE = "monospline_hermite"
    MONOSPLINE_COMPLETE = "monospline_complete"

    @classmethod
    def parse(cls, name: "str | Experiment") -> "Experiment":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        aliases = {
            "hingeerror": cls.HINGE,
            "perfect": cls.PERFECT_SPLINE,
            "perfectsplineerror": cls.PERFECT_SPLINE,
            "monosplinehermite": cls.MONOSPLINE_HERMITE,
            "monospline": cls.MONOSPLINE_HERMITE,
            "monosplinecomplete": cls.MONOSPLINE_COMPLETE,
        }
        for e in cls:
            if key == e.value:
                return e
        if key.replace("_", "") in aliases:
            return aliases[key.replace("_", "")]
        raise ConfigurationError(f"unknown experiment {name!r}")

    @property
    def draws_hinge(self) -> bool:
        return self is Experiment.HINGE

    @property
    def mode(self) -> Mode:
        return Mode.COMPLETE if self is Experiment.MONOSPLINE_COMPLETE else Mode.HERMITE


@dataclass(frozen=True)
class McPlan:
    experiment: Experiment
    k: int
    replications: int
    seed: int = 0
    precision: int = 256
    worst_n: int | None = None
    basis: BasisKind = BasisKind.BSPLINE

    def __post_init__(self):
        object.__setattr__(self, "experiment", Experiment.parse(self.experiment))
        object.__setattr__(self, "basis", BasisKind(self.basis))
        if self.worst_n is None:
            object.__setattr__(self, "worst_n", min(10, max(self.replications, 0)))
        if self.k < 3:
            raise ConfigurationError("k must be >= 3")
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        if not 0 <= self.worst_n <= self.replications:
            raise ConfigurationError("worst_n must lie in [0, replications]")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["experiment"] = self.experiment.value
        d["basis"] = self.basis.value
        return d


@dataclass(frozen=True)
class Replication:
    index: int
    error: float
    condition: float
    flagged: bool
    knots: tuple
    u: float | None
    precision: str
    failed: bool = False
    message: str = ""


@dataclass(frozen=True)
class Statistics:
    count: int
    mean: float
    median: float
    std_dev: float
    q95: float
    q99: float
    max: float


@dataclass(frozen=True)
class WorstEntry:
    replication: int
    error: float
    knots: tuple
    u: float | None
    condition: float
    close_pairs: tuple


@dataclass(frozen=True)
class McSummary:
    plan: McPlan
    stats: Statistics
    condition_flagged: int
    failed: int
    worst: tuple
    records: tuple = field(repr=False)

    # flat accessors mirroring the table columns
    mean = property(lambda self: self.stats.mean)
    median = property(lambda self: self.stats.median)
    std_dev = property(lambda self: self.stats.std_dev)
    q95 = property(lambda self: self.stats.q95)
    q99 = property(lambda self: self.stats.q99)
    max = property(lambda self: self.stats.max)
    count = property(lambda self: self.stats.count)
    seed = property(lambda self: self.plan.seed)

    def to_dict(self) -> dict:
        return {
            "plan": self.plan.to_dict(),
            "seed": self.plan.seed,
            "statistics": asdict(self.stats),
            "condition_flagged": self.condition_flagged,
            "failed": self.failed,
            "worst": [asdict(w) for w in self.worst],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# -- sampling ---------------------------------------------------------------

def draw_uniforms(seed: int, replication: int, n: int) -> list[float]:
    """n doubles in the open interval (0, 1) for one replication."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(replication,))))
    out: list[float] = []
    while len(out) < n:
        for x in rng.random(n - len(out)):
            if x > 0.0:
                out.append(float(x))
    return out


def replication_inputs(plan: McPlan, r: int) -> tuple[list[float], float | None]:
    m = 2 * plan.k - 4
    u_draws = draw_uniforms(plan.seed, r, m + 1 if plan.experiment.draws_hinge else m)
    knots = sorted(u_draws[:m])
    u = u_draws[m] if plan.experiment.draws_hinge else None
    return knots, u


def _target(plan: McPlan, config: KnotConfiguration, u):
    k = plan.k
    exp = plan.experiment
    if exp is Experiment.HINGE:
        return lambda a: hinge(k, u, a)
    if exp is Experiment.PERFECT_SPLINE:
        return lambda a: perfect_spline(config, a)
    return lambda a: monomial(k, a)


def run_replication(plan: McPlan, r: int) -> Replication:
    knots, u = replication_inputs(plan, r)
    try:
        config = KnotConfiguration(plan.k, tuple(knots))
        res = solve_error(config, _target(plan, config, u), plan.experiment.mode, plan.precision, plan.basis)
    except (HermitekError, ArithmeticError, ValueError) as exc:
        return Replication(r, math.nan, math.inf, True, tuple(knots), u, f"float{ESCALATED_PRECISION}", True, str(exc))
    d = res.interpolant.diagnostics
    return Replication(r, float(res.report.value), d.condition, d.escalated, tuple(knots), u, d.precision)


def _run_chunk(args) -> list[Replication]:
    plan, indices = args
    return [run_replication(plan, r) for r in indices]


# -- statistics ---------------------------------------------------------------

def nearest_rank(sorted_values: Sequence[float], q: float) -> float:
    n = len(sorted_values)
    idx = max(math.ceil(q * n), 1) - 1
    return sorted_values[min(idx, n - 1)]


def summarize(errors: Sequence[float]) -> Statistics:
    """Mean, n-1 standard deviation, nearest-rank median/quantiles, max."""
    xs = sorted(float(e) for e in errors)
    n = len(xs)
    if n == 0:
        nan = math.nan
        return Statistics(0, nan, nan, nan, nan, nan, nan)
    mean = math.fsum(xs) / n
    std = math.sqrt(math.fsum((x - mean) ** 2 for x in xs) / (n - 1)) if n > 1 else 0.0
    return Statistics(n, mean, nearest_rank(xs, 0.5), std, nearest_rank(xs, 0.95), nearest_rank(xs, 0.99), xs[-1])


def flag_close_knots(knots: Sequence, threshold: float = CLOSE_KNOT_GAP) -> tuple:
    """Index pairs (i, i+1) of neighbouring knots closer than ``threshold``."""
    ks = [float(x) for x in knots]
    return tuple((i, i + 1) for i in range(len(ks) - 1) if ks[i + 1] - ks[i] < threshold)


def _worst(records: Sequence[Replication], n: int) -> tuple:
    good = [r for r in records if not r.failed]
    good.sort(key=lambda r: (-r.error, r.index))
    return tuple(
        WorstEntry(r.index, r.error, r.knots, r.u, r.condition, flag_close_knots(r.knots)) for r in good[:n]
    )


def isolate_worst(summary: McSummary, n: int) -> tuple:
    """Top-n replications by error, with configurations and close-knot flags."""
    return _worst(summary.records, n)


def aggregate(plan: McPlan, records: Sequence[Replication]) -> McSummary:
    records = tuple(sorted(records, key=lambda r: r.index))
    stats = summarize([r.error for r in records if not r.failed])
    return McSummary(
        plan,
        stats,
        sum(1 for r in records if r.flagged),
        sum(1 for r in records if r.failed),
        _worst(records, plan.worst_n),
        records,
    )


def run_mc(plan: McPlan, workers: int = 1) -> McSummary:
    n = plan.replications
    if workers <= 1 or n < 2:
        records = [run_replication(plan, r) for r in range(n)]
    else:
        # contiguous chunks, several per worker for balance
        chunks = max(workers * 4, 1)
        size = math.ceil(n / chunks)
        jobs = [(plan, range(s, min(s + size, n))) for s in range(0, n, size)]
        records = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_chunk, jobs):
                records.extend(part)
    return aggregate(plan, records)


def equispaced_evidence(summary: McSummary) -> dict:
    """Smallest observed monospline error against the equispaced value (log only)."""
    ref = float(equispaced_sup(summary.plan.k))
    low = min((r.error for r in summary.records if not r.failed), default=math.nan)
    return {"k": summary.plan.k, "min_error": low, "equispaced_sup": ref, "holds": low >= ref}


# -- persistence ------------------------------------------------------------

def artifact_stem(plan: McPlan) -> str:
    return f"mc_{plan.experiment.value}_k{plan.k}_seed{plan.seed}"


def write_csv(summary: McSummary, path) -> Path:
    path = Path(path)
    m = 2 * summary.plan.k - 4
    header = ["replication", "error", "condition", "flagged", *[f"knot_{i + 1}" for i in range(m)], "u"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in summary.records:
            w.writerow([
                r.index,
                repr(r.error),
                repr(r.condition),
                int(r.flagged),
                *[repr(x) for x in r.knots],
                "" if r.u is None else repr(r.u),
            ])
    return path


def write_artifacts(summary: McSummary, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = artifact_stem(summary.plan)
    csv_path = write_csv(summary, out / f"{stem}.csv")
    json_path = out / f"{stem}.json"
    json_path.write_text(summary.to_json() + "\n")
    return csv_path, json_path


def default_workers() -> int:
    return max(1, (os.cpu_count() or 1))


# -- re-solving reported worst configurations --------------------------------

_SPREAD = Fraction(1, 100000)

# Knot sets reported as the two largest Hermite errors for f_0 (k = 7..10),
# printed to 3-4 decimals, with the reported error value e.
REPORTED_WORST = {
    (7, 1): (4.01e5, "0.022 0.065 0.095 0.269 0.272 0.377 0.582 0.678 0.685 0.686"),
    (7, 2): (2.05, "0.3433 0.3439 0.3444 0.4709 0.5058 0.5327 0.6057 0.9460 0.9472 0.999"),
    (8, 1): (1.83e10, "0.0810 0.1265 0.1360 0.1410 0.1573 0.1680 0.3770 0.3820 0.6975 0.7873 0.7873 0.7879"),
    (8, 2): (7.09e6, "0.0178 0.0709 0.0960 0.105 0.153 0.279 0.308 0.366 0.380 0.7477 0.7478 0.7505"),
    (9, 1): (1.14e8, "0.2901 0.2905 0.2933 0.4046 0.442 0.510 0.530 0.732 0.747 0.891 0.894 0.903 0.943 0.973"),
    (9, 2): (7.71e5, "0.023 0.064 0.128 0.160 0.198 0.275 0.399 0.551 0.593 0.624 0.652 0.683 0.686 0.688"),
    (10, 1): (8.42e14, "0.241 0.241 0.292 0.322 0.340 0.362 0.375 0.436 0.467 0.586 0.704 0.761 0.789 0.8890 0.8892 0.8894"),
    (10, 2): (6.17e11, "0.1721 0.1726 0.1739 0.2551 0.382 0.601 0.613 0.701 0.743 0.745 0.763 0.783 0.802 0.826 0.953 0.965"),
}


def strict_knots(values: Sequence) -> tuple:
    """Exact knots with repeated printed values split by +-1e-5 around their value."""
    q = [Fraction(str(v)) for v in values]
    out = list(q)
    i = 0
    while i < len(q):
        j = i
        while j + 1 < len(q) and q[j + 1] == q[i]:
            j += 1
        if j > i:
            m = j - i + 1
            for t in range(m):
                out[i + t] = q[i] + _SPREAD * (2 * t - (m - 1)) / (m - 1)
        i = j + 1
    return tuple(out)


@dataclass(frozen=True)
class Replay:
    k: int
    rank: int
    reported: float
    knots: tuple
    error: float
    bound: float
    condition: float
    precision: str
    check_error: float

    @property
    def collapsed(self) -> bool:
        return self.error < self.reported / 1e3

    @property
    def stable(self) -> bool:
        """Agreement between the 1024-bit solve and a wider check solve."""
        return abs(self.error - self.check_error) <= 1e-12 * max(abs(self.check_error), 1e-300)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["knots"] = [str(x) for x in self.knots]
        d["collapsed"] = self.collapsed
        d["stable"] = self.stable
        return d


def replay_configuration(
    k: int,
    knots: Sequence,
    reported: float = math.nan,
    rank: int = 0,
    precision: int = ESCALATED_PRECISION,
    check_precision: int = 1536,
) -> Replay:
    """Re-solve f_0 and S* on one configuration at high precision.

    A second solve of f_0 at ``check_precision`` tells a genuine large error
    (both agree) from a rounding artifact.
    """
    config = KnotConfiguration(k, tuple(knots))
    res = solve_error(config, lambda a: monomial(k, a), Mode.HERMITE, precision)
    ps = solve_error(config, lambda a: perfect_spline(config, a), Mode.HERMITE, precision)
    check = solve_error(config, lambda a: monomial(k, a), Mode.HERMITE, check_precision)
    bound = float(ps.report.value) * math.factorial(2 * k)
    d = res.interpolant.diagnostics
    return Replay(
        k, rank, reported, config.interior, float(res.report.value), bound, d.condition, d.precision,
        float(check.report.value),
    )


def replay_worst(k: int, rank: int, precision: int = ESCALATED_PRECISION, check_precision: int = 1536) -> Replay:
    """Re-solve one of the reported worst configurations."""
    reported, text = REPORTED_WORST[(k, rank)]
    return replay_configuration(k, strict_knots(text.split()), reported, rank, precision, check_precision)
