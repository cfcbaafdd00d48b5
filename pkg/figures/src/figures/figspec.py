"""Figure request description and validation."""

from __future__ import annotations

from dataclasses import dataclass, field

KINDS = ("energy-sweep", "profile", "heatmap", "quiver", "cross-section")


@dataclass(frozen=True)
class FigureSpec:
    """What to draw, from which files, with which decorations.

    `normalize` (each heatmap panel scaled to unit maximum) is only
    meaningful for heatmaps; `inset` (a refinement-scan CSV drawn as an
    energy-vs-spacing inset) only for profiles; `every` (arrow decimation)
    only for quivers.  The constructor enforces that so a bad flag fails
    before any file is touched.
    """

    kind: str
    inputs: tuple = ()
    out: str = "figure.png"
    xlabel: str | None = None
    ylabel: str | None = None
    labels: tuple = ()
    title: str | None = None
    normalize: bool = False
    inset: str | None = None
    every: int = 1

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input file is required")
        if self.labels and len(self.labels) != len(self.inputs):
            raise ValueError(f"got {len(self.labels)} labels for "
                             f"{len(self.inputs)} inputs")
        if not str(self.out).endswith((".png", ".svg")):
            raise ValueError(f"output must end in .png or .svg, got {self.out!r}")
        if self.normalize and self.kind != "heatmap":
            raise ValueError("normalize is only valid for heatmaps")
        if self.inset is not None and self.kind != "profile":
            raise ValueError("inset is only valid for profile figures")
        if self.every != 1 and self.kind != "quiver":
            raise ValueError("every is only valid for quiver figures")
        if self.every < 1:
            raise ValueError(f"every must be >= 1, got {self.every}")

    def label_for(self, index: int) -> str:
        if self.labels:
            return self.labels[index]
        name = str(self.inputs[index]).rsplit("/", 1)[-1]
        return name[:-4] if name.endswith(".csv") else name
