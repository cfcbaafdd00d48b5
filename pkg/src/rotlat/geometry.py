"""Square-lattice geometry: site coordinates, bond lists, rotation factors.

Sites live on an nx-by-ny grid with lattice constant `spacing`.  The rotation
axis sits at `center` (physical coordinates), which defaults to the geometric
midpoint of the grid, so coordinates are measured relative to the trap axis.
Boundaries are open (hard wall): sites outside the grid simply have no bonds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

Site = tuple[int, int]


@dataclass(frozen=True)
class LatticeGeometry:
    nx: int
    ny: int
    spacing: float
    center: tuple[float, float] | None = None  # physical (cx, cy); None -> midpoint

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid must be at least 2x2, got {self.nx}x{self.ny}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if self.center is None:
            cx = (self.nx - 1) * self.spacing / 2.0
            cy = (self.ny - 1) * self.spacing / 2.0
            object.__setattr__(self, "center", (cx, cy))
        else:
            object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def site_count(self) -> int:
        return self.nx * self.ny

    def site_index(self, site: Site) -> int:
        """Flat index of site (ix, iy); ix runs fastest."""
        ix, iy = site
        if not (0 <= ix < self.nx and 0 <= iy < self.ny):
            raise ValueError(f"site ({ix}, {iy}) outside {self.nx}x{self.ny} grid")
        return ix + self.nx * iy

    def site_at(self, p: int) -> Site:
        if not (0 <= p < self.site_count):
            raise ValueError(f"flat index {p} outside grid of {self.site_count} sites")
        return (p % self.nx, p // self.nx)

    def site_coordinates(self, site: Site) -> tuple[float, float]:
        """Physical coordinates of a site relative to the rotation axis."""
        ix, iy = site
        if not (0 <= ix < self.nx and 0 <= iy < self.ny):
            raise ValueError(f"site ({ix}, {iy}) outside {self.nx}x{self.ny} grid")
        cx, cy = self.center
        return (ix * self.spacing - cx, iy * self.spacing - cy)

    # -- vectorized coordinate arrays, indexed by flat site index ------------

    @cached_property
    def x(self) -> np.ndarray:
        ix = np.arange(self.site_count) % self.nx
        return ix * self.spacing - self.center[0]

    @cached_property
    def y(self) -> np.ndarray:
        iy = np.arange(self.site_count) // self.nx
        return iy * self.spacing - self.center[1]

    # -- bonds ----------------------------------------------------------------
    # Each unordered nearest-neighbor pair appears exactly once, canonically
    # oriented along +x or +y from its lower-indexed endpoint.

    @cached_property
    def bonds_x(self) -> tuple[np.ndarray, np.ndarray]:
        """(p, q) flat-index arrays for all bonds p -> p+x."""
        ix = np.arange(self.site_count) % self.nx
        p = np.flatnonzero(ix < self.nx - 1)
        return p, p + 1

    @cached_property
    def bonds_y(self) -> tuple[np.ndarray, np.ndarray]:
        """(p, q) flat-index arrays for all bonds p -> p+y."""
        iy = np.arange(self.site_count) // self.nx
        p = np.flatnonzero(iy < self.ny - 1)
        return p, p + self.nx

    def bond_count(self) -> int:
        return (self.nx - 1) * self.ny + self.nx * (self.ny - 1)

    def bonds(self):
        """Iterate canonical bonds as ((ix,iy), (jx,jy), direction) tuples."""
        for p, q in zip(*self.bonds_x):
            yield self.site_at(p), self.site_at(q), "+x"
        for p, q in zip(*self.bonds_y):
            yield self.site_at(p), self.site_at(q), "+y"

    def are_neighbors(self, a: Site, b: Site) -> bool:
        return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def rotation_factor_k(geom: LatticeGeometry, p: Site, q: Site) -> float:
    """Geometric factor K_pq = (x_p*y_q - y_p*x_q) / d^2 for a bond p -> q.

    This is r_p r_q sin(alpha_pq)/d^2 written with the cross product, so no
    angles are ever evaluated.  Antisymmetric under p <-> q; zero whenever the
    rotation axis lies on the line through the bond.
    """
    if not geom.are_neighbors(p, q):
        raise ValueError(f"sites {p} and {q} are not nearest neighbors")
    xp, yp = geom.site_coordinates(p)
    xq, yq = geom.site_coordinates(q)
    d = geom.spacing
    return (xp * yq - yp * xq) / (d * d)


def rotation_factors_x(geom: LatticeGeometry) -> np.ndarray:
    """K_pq for every +x bond, aligned with geom.bonds_x.  Equals -y_p/d."""
    p, q = geom.bonds_x
    d = geom.spacing
    return (geom.x[p] * geom.y[q] - geom.y[p] * geom.x[q]) / (d * d)


def rotation_factors_y(geom: LatticeGeometry) -> np.ndarray:
    """K_pq for every +y bond, aligned with geom.bonds_y.  Equals +x_p/d."""
    p, q = geom.bonds_y
    d = geom.spacing
    return (geom.x[p] * geom.y[q] - geom.y[p] * geom.x[q]) / (d * d)
