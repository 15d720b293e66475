"""SVG plots of functions, interpolants and errors (matplotlib, svg backend)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .polyalg import PiecewisePolynomial

SAMPLES_PER_PIECE = 512


def sample(pp: PiecewisePolynomial, per_piece: int = SAMPLES_PER_PIECE) -> tuple[np.ndarray, np.ndarray]:
    """Values on ``per_piece`` points of every piece, endpoints included."""
    ts, vs = [], []
    for (a, b), p in zip(pp.intervals, pp.pieces):
        lo, hi = float(a), float(b)
        t = np.linspace(lo, hi, per_piece)
        c = [float(x) for x in p.coeffs]
        ts.append(t)
        vs.append(np.polynomial.polynomial.polyval(t - lo, c))
    return np.concatenate(ts), np.concatenate(vs)


def _figure():
    import matplotlib

    matplotlib.use("svg", force=True)
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "hermitek"
    plt.rcParams["svg.fonttype"] = "none"
    return plt


def _save(plt, fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_interpolant(f: PiecewisePolynomial, s: PiecewisePolynomial, knots, path, title: str = "") -> Path:
    plt = _figure()
    fig, ax = plt.subplots(figsize=(7, 4))
    t, y = sample(f)
    ax.plot(t, y, label="f", lw=1.5)
    t, y = sample(s)
    ax.plot(t, y, "--", label="H f", lw=1.2)
    for x in knots:
        ax.axvline(float(x), color="0.8", lw=0.6, zorder=0)
    ax.set_xlim(0, 1)
    ax.set_xlabel("t")
    ax.legend()
    if title:
        ax.set_title(title)
    return _save(plt, fig, path)


def plot_error(err: PiecewisePolynomial, knots, path, title: str = "", argmax=None) -> Path:
    plt = _figure()
    fig, ax = plt.subplots(figsize=(7, 4))
    t, y = sample(err)
    ax.plot(t, y, lw=1.2, color="C3")
    ax.axhline(0.0, color="0.5", lw=0.6)
    for x in knots:
        ax.axvline(float(x), color="0.8", lw=0.6, zorder=0)
    if argmax is not None:
        ax.axvline(float(argmax), color="C3", lw=0.6, ls=":")
    ax.set_xlim(0, 1)
    ax.set_xlabel("t")
    ax.set_ylabel("f - H f")
    if title:
        ax.set_title(title)
    return _save(plt, fig, path)
