"""Figure rendering for the report paths of the CLI.

Plots are written straight to files with the Agg backend; there is no
interactive display.  The figures mirror the emitted tables: a packing
density profile across the regimes, single-exponent scan curves, and the
multi-exponent curve family with its kissing-number floor.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .lattice import ONE_THIRD

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _new_axes(xlabel: str, ylabel: str, width: float = 6.4):
    fig, ax = plt.subplots(figsize=(width, width * _GOLDEN))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _finish(fig, path: str) -> str:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def save_density_plot(rows, path: str) -> str:
    """Render the packing density profile for (A, density) rows."""
    a = [r[0] for r in rows]
    d = [r[1] for r in rows]
    fig, ax = _new_axes("A", "packing density")
    ax.plot(a, d, color="black", lw=1.5)
    for marker, label in ((ONE_THIRD, "acc"), (0.5, "bcc"), (1.0, "fcc")):
        if a[0] <= marker <= a[-1]:
            ax.axvline(marker, color="gray", ls="--", lw=0.8)
            ax.annotate(label, (marker, min(d)), textcoords="offset points", xytext=(3, 3), fontsize=9)
    return _finish(fig, path)


def save_scan_plot(table, path: str) -> str:
    """Render one scan curve; the grid minimum is marked."""
    a = [r.a for r in table.rows]
    v = [r.value for r in table.rows]
    fig, ax = _new_axes("A", f"L(A; s={table.s:g})")
    ax.plot(a, v, color="black", lw=1.5, marker=".", ms=4)
    imin = min(range(len(v)), key=v.__getitem__)
    ax.plot([a[imin]], [v[imin]], "o", color="firebrick", ms=6)
    return _finish(fig, path)


def save_family_plot(curves, kiss_rows, path: str) -> str:
    """Render the curve family {s: rows} plus the kissing-number floor.

    curves maps each exponent to its (A, value) rows; kiss_rows carries the
    (A, kissing number) step profile drawn underneath.
    """
    fig, ax = _new_axes("A", "L(A; s)")
    for s in sorted(curves):
        rows = curves[s]
        ax.plot([r[0] for r in rows], [r[1] for r in rows], lw=1.5, label=f"s = {s:g}")
    if kiss_rows:
        ax.plot(
            [r[0] for r in kiss_rows],
            [r[1] for r in kiss_rows],
            lw=1.0,
            ls="--",
            color="gray",
            label="s = inf (kissing number)",
        )
    ax.legend(frameon=False, fontsize=9)
    return _finish(fig, path)
