"""Deterministic matplotlib rendering for each figure kind.

Determinism contract: fixed figure geometry and fonts, a fixed SVG hash
salt, and no date/software metadata in the output, so rendering the same
inputs twice yields byte-identical files.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import figio
from .figspec import FigureSpec

_RC = {
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "svg.hashsalt": "figures",
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
}


def render(spec: FigureSpec) -> str:
    """Draw the figure described by spec and write it to spec.out."""
    with plt.rc_context(_RC):
        fig = _DRAW[spec.kind](spec)
        if spec.title:
            fig.suptitle(spec.title)
        outdir = os.path.dirname(spec.out)
        if outdir:
            os.makedirs(outdir, exist_ok=True)
        if str(spec.out).endswith(".svg"):
            # Date/Creator default to the render time and tool version;
            # both must go for byte-stable output.
            fig.savefig(spec.out, format="svg",
                        metadata={"Date": None, "Creator": None})
        else:
            fig.savefig(spec.out, format="png", metadata={"Software": None})
        plt.close(fig)
    return spec.out


def _draw_energy_sweep(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for i, path in enumerate(spec.inputs):
        data = figio.read_sweep(path)
        color = f"C{i}"
        ax.plot(data["bigomega"], data["energy_shifted"], color=color,
                label=spec.label_for(i), zorder=2)
        contained = np.array([v == "contained" for v in data["verdict"]])
        ax.plot(data["bigomega"][contained], data["energy_shifted"][contained],
                "o", color=color, ms=5, zorder=3)
        ax.plot(data["bigomega"][~contained], data["energy_shifted"][~contained],
                "o", mfc="none", mec=color, ms=5, zorder=3)
    ax.set_xlabel(spec.xlabel or "rotation frequency")
    ax.set_ylabel(spec.ylabel or "shifted ground energy")
    ax.legend(loc="best")
    return fig


def _draw_profiles_on(ax, spec: FigureSpec):
    for i, path in enumerate(spec.inputs):
        coords, values = figio.read_profile(path)
        ax.plot(coords, values, label=spec.label_for(i))
    ax.set_xlabel(spec.xlabel or "position")
    ax.set_ylabel(spec.ylabel or "density")
    ax.legend(loc="best")


def _draw_profile(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    _draw_profiles_on(ax, spec)
    if spec.inset:
        scan = figio.read_refinement_scan(spec.inset)
        box = ax.inset_axes([0.64, 0.62, 0.33, 0.33])
        box.plot(scan["spacing"], scan["energy"], "o-", color="C3", ms=4)
        box.invert_xaxis()          # refinement runs left to right
        box.set_xlabel("spacing", fontsize=8)
        box.set_ylabel("energy", fontsize=8)
        box.tick_params(labelsize=7)
        box.grid(alpha=0.3)
    return fig


def _draw_cross_section(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    _draw_profiles_on(ax, spec)
    return fig


def _draw_heatmap(spec: FigureSpec):
    n = len(spec.inputs)
    fig, axes = plt.subplots(1, n, figsize=(4.2 * n, 4.0), squeeze=False)
    for i, (ax, path) in enumerate(zip(axes[0], spec.inputs)):
        grid, extent = figio.read_scalar_field(path)
        if spec.normalize:
            peak = grid.max()
            if peak > 0:
                grid = grid / peak   # a rescaled copy; the CSV is untouched
        im = ax.imshow(grid, origin="lower", extent=extent, cmap="viridis",
                       vmin=0.0, vmax=1.0 if spec.normalize else None,
                       interpolation="nearest")
        ax.set_title(spec.label_for(i), fontsize=9)
        ax.set_xlabel(spec.xlabel or "x")
        if i == 0:
            ax.set_ylabel(spec.ylabel or "y")
        ax.grid(False)
        fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04)
    return fig


def _draw_quiver(spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(5.6, 5.2))
    xm, ym, u, v = figio.read_bond_field(spec.inputs[0])
    peak = np.hypot(u, v).max()
    if peak > 0:
        u, v = u / peak, v / peak    # longest arrow == the max bond current
    sel = slice(None, None, spec.every)
    ax.quiver(xm[sel], ym[sel], u[sel], v[sel], angles="xy",
              scale_units="width", scale=30.0, width=0.003, color="C0")
    ax.set_aspect("equal")
    ax.set_xlabel(spec.xlabel or "x")
    ax.set_ylabel(spec.ylabel or "y")
    ax.grid(alpha=0.2)
    return fig


_DRAW = {
    "energy-sweep": _draw_energy_sweep,
    "profile": _draw_profile,
    "heatmap": _draw_heatmap,
    "quiver": _draw_quiver,
    "cross-section": _draw_cross_section,
}
