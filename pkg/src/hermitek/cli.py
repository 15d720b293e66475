"""Command-line front end: ``hermitek single|mc|table4|worst|compare``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from math import factorial
from pathlib import Path

from . import mc
from .arith import Arith, to_decimal
from .basis import BasisKind, KnotConfiguration
from .canon import bernoulli_number, equispaced_sup, hinge, monomial, perfect_spline
from .errors import ConfigurationError, DomainError, HermitekError
from .interpolate import ESCALATED_PRECISION, Mode, solve_error
from .polyalg import from_json, to_json

K_RANGE = (3, 10)
DEFAULT = object()
DIGITS = 20


class UsageError(Exception):
    pass


def output_dir(args) -> Path:
    out = args.out or os.environ.get("HERMITEK_OUT") or "hermitek_out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def parse_precision(text: str):
    if text.lower() in ("rational", "exact"):
        return None
    try:
        bits = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"precision must be a bit count or 'rational', got {text!r}")
    if bits < 64:
        raise argparse.ArgumentTypeError("precision must be at least 64 bits")
    return bits


def check_k(k: int, allow_large: bool):
    lo, hi = K_RANGE
    if k < lo:
        raise UsageError(f"k must be >= {lo}")
    if k > hi and not allow_large:
        raise UsageError(f"k = {k} lies outside [{lo}, {hi}]; pass --allow-large-k to override")


def parse_knots(k: int, text: str | None) -> KnotConfiguration:
    if text is None:
        return KnotConfiguration.equispaced(k)
    try:
        values = [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed knot list {text!r}: {exc}")
    try:
        return KnotConfiguration(k, tuple(values))
    except ConfigurationError as exc:
        raise UsageError(str(exc))


def dec(x) -> str:
    return to_decimal(x, DIGITS)


def _function_factory(args, config: KnotConfiguration):
    k = config.k
    if args.hinge is not None:
        u = Fraction(args.hinge)
        if not 0 < u < 1:
            raise UsageError("hinge location must lie in (0, 1)")
        return f"hinge u={args.hinge}", lambda a: hinge(k, u, a)
    if args.perfect:
        return "perfect spline", lambda a: perfect_spline(config, a)
    if args.file:
        doc = json.loads(Path(args.file).read_text())
        pp = from_json(doc)
        return f"file {args.file}", lambda a: pp.convert(a)
    return f"t^{2 * k}", lambda a: monomial(k, a)


def _add_function_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--hinge", metavar="U", help="f(t) = (t-U)_+^(k-1)/(k-1)!")
    g.add_argument("--monomial", action="store_true", help="f(t) = t^(2k) (default)")
    g.add_argument("--perfect", action="store_true", help="perfect spline on the given knots")
    g.add_argument("--file", metavar="JSON", help="piecewise polynomial in JSON form")


# -- verbs ------------------------------------------------------------------

def cmd_single(args) -> int:
    from .plotting import plot_error, plot_interpolant

    check_k(args.k, args.allow_large_k)
    config = parse_knots(args.k, args.knots)
    label, f = _function_factory(args, config)
    out = output_dir(args)
    modes = [Mode(args.mode)]
    if args.compare_complete and Mode.COMPLETE not in modes:
        modes.append(Mode.COMPLETE)
    basis = BasisKind(args.basis)
    for mode in modes:
        res = solve_error(config, f, mode, args.precision, basis)
        d = res.interpolant.diagnostics
        print(f"{mode.value:9s} k={args.k} f={label}")
        print(f"  sup error   {dec(res.report.value)}")
        print(f"  at t        {dec(res.report.argmax)}")
        print(f"  condition   {d.condition:.6e}  ({d.precision}{', escalated' if d.escalated else ''})")
        stem = out / f"single_{mode.value}_k{args.k}"
        doc = {
            "k": args.k,
            "knots": [str(x) for x in config.interior],
            "function": label,
            "mode": mode.value,
            "error_sup": str(res.report.value),
            "argmax": str(res.report.argmax),
            "certified": res.report.certified,
            "diagnostics": d.to_dict(),
            "interpolant": to_json(res.interpolant.spline),
            "error": to_json(res.error),
        }
        Path(f"{stem}.json").write_text(json.dumps(doc, indent=2) + "\n")
        g = f(res.interpolant.spline.arith)
        sites = config.as_floats()
        plot_interpolant(g, res.interpolant.spline, sites, f"{stem}_interpolant.svg", f"{label}, k={args.k}")
        plot_error(res.error, sites, f"{stem}_error.svg", f"error, {mode.value}", res.report.argmax)
        print(f"  wrote       {stem}.json, {stem.name}_interpolant.svg, {stem.name}_error.svg")
    return 0


TABLE_HEADER = f"{'k':>3} {'exp':>20} {'mean':>12} {'median':>12} {'std':>12} {'q95':>12} {'q99':>12} {'max':>12}"


def table_row(summary: mc.McSummary) -> str:
    s = summary.stats
    cells = " ".join(f"{v:12.4e}" for v in (s.mean, s.median, s.std_dev, s.q95, s.q99, s.max))
    return f"{summary.plan.k:>3} {summary.plan.experiment.value:>20} {cells}"


def cmd_mc(args) -> int:
    check_k(args.k, args.allow_large_k)
    plan = mc.McPlan(args.experiment, args.k, args.reps, args.seed, args.precision, min(args.worst, args.reps))
    t0 = time.perf_counter()
    summary = mc.run_mc(plan, workers=args.threads)
    elapsed = time.perf_counter() - t0
    print(TABLE_HEADER)
    print(table_row(summary))
    if plan.experiment is mc.Experiment.PERFECT_SPLINE:
        print(f"max x (2k)! = {summary.stats.max * factorial(2 * args.k):.6f}")
    if plan.experiment in (mc.Experiment.MONOSPLINE_HERMITE, mc.Experiment.MONOSPLINE_COMPLETE):
        ev = mc.equispaced_evidence(summary)
        print(f"min error {ev['min_error']:.6e} vs equispaced {ev['equispaced_sup']:.6e}")
    print(f"flagged (condition above threshold): {summary.condition_flagged}; failed: {summary.failed}")
    for w in summary.worst:
        knots = " ".join(f"{x:.4f}" for x in w.knots)
        u = "" if w.u is None else f" u={w.u:.4f}"
        print(f"  #{w.replication:<6d} {w.error:.6e}  cond {w.condition:.3e}  [{knots}]{u}  close={list(w.close_pairs)}")
    csv_path, json_path = mc.write_artifacts(summary, output_dir(args))
    print(f"wrote {csv_path} and {json_path} ({elapsed:.1f} s)")
    return 0


def table4_rows(k_max: int) -> list[tuple[int, Fraction, Fraction]]:
    return [(k, bernoulli_number(2 * k), equispaced_sup(k)) for k in range(3, k_max + 1)]


def cmd_table4(args) -> int:
    k_max = 10 if args.extended else 6
    print(f"{'k':>3}  {'B_2k':>24}  {'sup |M|':>40}  decimal")
    for k, b, s in table4_rows(k_max):
        print(f"{k:>3}  {str(b):>24}  {str(s):>40}  {dec(Arith.exact().convert(s))}")
    return 0


def cmd_worst(args) -> int:
    out = output_dir(args)
    replays = []
    if args.from_json:
        doc = json.loads(Path(args.from_json).read_text())
        k = doc["plan"]["k"]
        for i, w in enumerate(doc["worst"], 1):
            replays.append(mc.replay_configuration(k, [Fraction(x) for x in w["knots"]], w["error"], i, args.precision))
    else:
        for k in args.k:
            for rank in (1, 2):
                replays.append(mc.replay_worst(k, rank, args.precision))
    print(f"{'k':>3} {'rank':>4} {'reported':>11} {'re-solved':>26} {'(2k)! |E(S*)|':>14} {'condition':>11}  verdict")
    for r in replays:
        verdict = "collapses" if r.collapsed else "persists"
        if not r.stable:
            verdict += " (unstable at this precision)"
        print(f"{r.k:>3} {r.rank:>4} {r.reported:11.3e} {dec(r.error):>26} {r.bound:14.4e} {r.condition:11.3e}  {verdict}")
    path = out / "worst_replay.json"
    path.write_text(json.dumps([r.to_dict() for r in replays], indent=2) + "\n")
    print(f"wrote {path}")
    return 0


def cmd_compare(args) -> int:
    check_k(args.k, args.allow_large_k)
    config = parse_knots(args.k, args.knots)
    label, f = _function_factory(args, config)
    print(f"k={args.k} f={label} knots={[str(x) for x in config.interior]}")
    print(f"{'mode':>9} {'basis':>16} {'sup error':>26} {'condition':>12} precision")
    rows = []
    for mode in Mode:
        for basis in BasisKind:
            res = solve_error(config, f, mode, args.precision, basis)
            d = res.interpolant.diagnostics
            rows.append({"mode": mode.value, "basis": basis.value, "error": str(res.report.value), **d.to_dict()})
            print(f"{mode.value:>9} {basis.value:>16} {dec(res.report.value):>26} {d.condition:12.4e} {d.precision}")
    path = output_dir(args) / f"compare_k{args.k}.json"
    path.write_text(json.dumps(rows, indent=2) + "\n")
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hermitek", description="Hermite spline interpolation error experiments")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=parse_precision, default=DEFAULT, help="bits, or 'rational' (default 256; worst: 1024)")
    common.add_argument("--out", help="output directory (default $HERMITEK_OUT or ./hermitek_out)")
    common.add_argument("--allow-large-k", action="store_true", help="permit k > 10")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("single", parents=[common], help="one interpolation with plots")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--knots", help="comma-separated interior knots (default equispaced)")
    _add_function_args(p)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="hermite")
    p.add_argument("--compare-complete", action="store_true", help="also solve the complete spline")
    p.add_argument("--basis", choices=[b.value for b in BasisKind], default="bspline")
    p.set_defaults(func=cmd_single)

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo study")
    p.add_argument("--experiment", default="hinge", help=", ".join(e.value for e in mc.Experiment))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--worst", type=int, default=10)
    p.add_argument("--threads", type=int, default=1, help="worker processes (results do not depend on it)")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("table4", parents=[common], help="exact equispaced sup-norms")
    p.add_argument("--extended", action="store_true", help="continue to k = 10")
    p.set_defaults(func=cmd_table4)

    p = sub.add_parser("worst", parents=[common], help="re-solve worst configurations at high precision")
    p.add_argument("--k", type=int, nargs="+", default=[7, 8, 9, 10])
    p.add_argument("--from-json", help="mc summary JSON whose worst entries to replay")
    p.set_defaults(func=cmd_worst)

    p = sub.add_parser("compare", parents=[common], help="Hermite vs complete, both bases")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--knots")
    _add_function_args(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision is DEFAULT:
        args.precision = ESCALATED_PRECISION if args.verb == "worst" else 256
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (HermitekError, DomainError, OSError) as exc:
        print(f"hermitek: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
