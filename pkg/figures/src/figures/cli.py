"""One console script per figure kind; flags mirror FigureSpec."""

from __future__ import annotations

import argparse
import sys

from .figio import SchemaError
from .figspec import FigureSpec
from .render import render


def _parser(kind: str, description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=f"fig-{kind}", description=description)
    p.add_argument("inputs", nargs="+", help="rotlat CSV output file(s)")
    p.add_argument("--out", required=True, help="output image (.png or .svg)")
    p.add_argument("--xlabel")
    p.add_argument("--ylabel")
    p.add_argument("--labels", nargs="+", default=(),
                   help="legend/panel labels, one per input")
    p.add_argument("--title")
    return p


def _run(kind: str, args: argparse.Namespace, **extra) -> int:
    try:
        spec = FigureSpec(kind=kind, inputs=args.inputs, out=args.out,
                          xlabel=args.xlabel, ylabel=args.ylabel,
                          labels=args.labels, title=args.title, **extra)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    try:
        path = render(spec)
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


def main_energy_sweep(argv=None) -> int:
    p = _parser("energy-sweep",
                "Shifted ground energy vs rotation frequency; filled markers "
                "mean contained, open markers mean escaping.")
    args = p.parse_args(argv)
    return _run("energy-sweep", args)


def main_profile(argv=None) -> int:
    p = _parser("profile", "Overlaid 1D density profiles, with an optional "
                "energy-vs-spacing refinement inset.")
    p.add_argument("--inset", help="containment-scan CSV drawn as an inset")
    args = p.parse_args(argv)
    return _run("profile", args, inset=args.inset)


def main_heatmap(argv=None) -> int:
    p = _parser("heatmap", "Side-by-side density heatmaps, one panel per "
                "input CSV.")
    p.add_argument("--normalize", action="store_true",
                   help="scale each panel to unit maximum")
    args = p.parse_args(argv)
    return _run("heatmap", args, normalize=args.normalize)


def main_quiver(argv=None) -> int:
    p = _parser("quiver", "Bond-current arrows at the bond midpoints, "
                "scaled so the longest arrow is the maximum bond current.")
    p.add_argument("--every", type=int, default=1,
                   help="draw every n-th arrow")
    args = p.parse_args(argv)
    return _run("quiver", args, every=args.every)


def main_cross_section(argv=None) -> int:
    p = _parser("cross-section", "Overlaid cross-section profiles.")
    args = p.parse_args(argv)
    return _run("cross-section", args)
