"""Densities, bond currents, fermionic filling, profiles, boundary mass."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import LatticeGeometry, Site
from .hamiltonian import ModelParams
from .eigensolver import EigenSolution


@dataclass
class ScalarField:
    """One real value per site, indexed like the flat site index."""

    geom: LatticeGeometry
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.geom.site_count,):
            raise ValueError(
                f"field needs {self.geom.site_count} values, got shape {self.values.shape}"
            )

    def as_grid(self) -> np.ndarray:
        """(ny, nx) view, rows indexed by iy."""
        return self.values.reshape(self.geom.ny, self.geom.nx)


@dataclass
class BondField:
    """One real value per canonical directed bond (+x and +y families).

    value(p -> q) for the canonical orientation; the reverse direction is the
    negation.  Arrays are aligned with geom.bonds_x / geom.bonds_y.
    """

    geom: LatticeGeometry
    x_values: np.ndarray
    y_values: np.ndarray

    def __post_init__(self):
        self.x_values = np.asarray(self.x_values, dtype=float)
        self.y_values = np.asarray(self.y_values, dtype=float)
        nxb = (self.geom.nx - 1) * self.geom.ny
        nyb = self.geom.nx * (self.geom.ny - 1)
        if self.x_values.shape != (nxb,) or self.y_values.shape != (nyb,):
            raise ValueError("bond value arrays do not match the bond lists")

    def value(self, p: Site, q: Site) -> float:
        """Signed current from site p to neighboring site q."""
        if not self.geom.are_neighbors(p, q):
            raise ValueError(f"sites {p} and {q} are not nearest neighbors")
        sign = 1.0
        if (q[0] - p[0], q[1] - p[1]) in ((-1, 0), (0, -1)):
            p, q, sign = q, p, -1.0
        fp = self.geom.site_index(p)
        if q[0] == p[0] + 1:
            ordinal = fp - fp // self.geom.nx          # +x bonds skip last column
            return sign * float(self.x_values[ordinal])
        return sign * float(self.y_values[fp])          # +y bonds are indexed by p

    def net_site_outflow(self) -> np.ndarray:
        """Sum_q value(p -> q) per site; zero sitewise for stationary states."""
        out = np.zeros(self.geom.site_count)
        px, qx = self.geom.bonds_x
        py, qy = self.geom.bonds_y
        np.add.at(out, px, self.x_values)
        np.add.at(out, qx, -self.x_values)
        np.add.at(out, py, self.y_values)
        np.add.at(out, qy, -self.y_values)
        return out


@dataclass
class Profile:
    """1D cut through a scalar field: physical coordinate vs value."""

    coords: np.ndarray
    values: np.ndarray
    axis: str
    offset: float        # fixed coordinate actually used (nearest grid line)


def density(geom: LatticeGeometry, state: np.ndarray) -> ScalarField:
    """Site density |psi_p|^2 of one (normalized) state."""
    state = np.asarray(state)
    if state.shape != (geom.site_count,):
        raise ValueError(f"state length {state.shape} does not match {geom.site_count} sites")
    return ScalarField(geom, np.abs(state) ** 2)


def multiplet_average_density(geom: LatticeGeometry, solution: EigenSolution,
                              members) -> ScalarField:
    """Mean density over a degenerate multiplet.

    Invariant under unitary remixing within the multiplet's span, which makes
    it the right reportable quantity for (quasi-)degenerate ground states --
    individual eigenvectors of a near-degenerate cluster are basis noise.
    """
    members = list(members)
    if not members:
        raise ValueError("multiplet must contain at least one state")
    vals = np.zeros(geom.site_count)
    for i in members:
        vals += np.abs(solution.eigenvectors[:, i]) ** 2
    return ScalarField(geom, vals / len(members))


def ground_density(geom: LatticeGeometry, solution: EigenSolution) -> ScalarField:
    """Density of the ground multiplet (averaged; see multiplet_average_density)."""
    return multiplet_average_density(geom, solution, solution.multiplets[0])


# -- currents -------------------------------------------------------------------


def bond_currents(geom: LatticeGeometry, params: ModelParams,
                  state: np.ndarray) -> BondField:
    """Probability current on every canonical bond for one state.

    J(p->q) = 2 t Im(conj(psi_p) psi_q) + 2 W_pq Re(conj(psi_p) psi_q),
    where W_pq is the same rotational hopping weight the Hamiltonian builder
    uses.  The second term is required for site-level continuity: with it,
    sum_q J(p->q) = -d|psi_p|^2/dt identically, so stationary states carry
    zero net current at every site.
    """
    from .hamiltonian import rotation_weights

    state = np.asarray(state, dtype=np.complex128)
    if state.shape != (geom.site_count,):
        raise ValueError(f"state length {state.shape} does not match {geom.site_count} sites")
    hop = params.t if params.kind == "hubbard" else 1.0 / (2.0 * geom.spacing**2)
    wx, wy = rotation_weights(geom, params.bigomega)
    px, qx = geom.bonds_x
    py, qy = geom.bonds_y
    cx = np.conj(state[px]) * state[qx]
    cy = np.conj(state[py]) * state[qy]
    jx = 2.0 * hop * cx.imag + 2.0 * wx * cx.real
    jy = 2.0 * hop * cy.imag + 2.0 * wy * cy.real
    return BondField(geom, jx, jy)


# -- fermions ---------------------------------------------------------------------


def fermion_occupancies(solution: EigenSolution, n_fermions: int) -> np.ndarray:
    """Orbital weights for n noninteracting spinless fermions at T=0.

    Whole multiplets below the Fermi level get weight 1; a partially filled
    Fermi multiplet of size g holding s remaining particles gets s/g on each
    member, so no arbitrary basis choice inside the multiplet leaks into
    observables.  Weights sum to n_fermions exactly.
    """
    m = solution.count
    if n_fermions < 1:
        raise ValueError(f"n_fermions must be >= 1, got {n_fermions}")
    if n_fermions > m:
        raise ValueError(f"{n_fermions} fermions but only {m} converged states")
    dimension = solution.eigenvectors.shape[0]
    occ = np.zeros(m)
    remaining = n_fermions
    for cluster in solution.multiplets:
        if remaining == 0:
            break
        g = len(cluster)
        take = min(g, remaining)
        if take < g and cluster[-1] == m - 1 and m < dimension:
            raise ValueError(
                "Fermi-level multiplet is cut off by the computed window; "
                f"solve for more than {m} states to resolve it"
            )
        occ[cluster] = take / g
        remaining -= take
    return occ


def fermion_density(geom: LatticeGeometry, solution: EigenSolution,
                    n_fermions: int) -> ScalarField:
    """Total density of the n lowest fermionic orbitals (sums to n)."""
    occ = fermion_occupancies(solution, n_fermions)
    amp2 = np.abs(solution.eigenvectors[:, :len(occ)]) ** 2
    return ScalarField(geom, amp2 @ occ)


# -- cuts and aggregates -----------------------------------------------------------


def cross_section(field: ScalarField, axis: str, offset: float = 0.0) -> Profile:
    """Profile of a field along x, y, or the main diagonal.

    axis="x": values along a row at the grid line y nearest `offset` (the
    profile coordinate is x); axis="y" symmetric; axis="diag": sites along
    the lattice diagonal passing (nearest) through the rotation axis, with
    the signed distance along the diagonal as coordinate.  `offset` must land
    within half a spacing of an existing grid line.
    """
    geom = field.geom
    grid = field.as_grid()
    d = geom.spacing
    if axis == "x":
        rows = np.arange(geom.ny) * d - geom.center[1]
        iy = int(np.argmin(np.abs(rows - offset)))
        if abs(rows[iy] - offset) > d / 2 + 1e-9:
            raise ValueError(f"offset {offset} does not address a grid row")
        xs = np.arange(geom.nx) * d - geom.center[0]
        return Profile(xs, grid[iy, :].copy(), "x", float(rows[iy]))
    if axis == "y":
        cols = np.arange(geom.nx) * d - geom.center[0]
        ix = int(np.argmin(np.abs(cols - offset)))
        if abs(cols[ix] - offset) > d / 2 + 1e-9:
            raise ValueError(f"offset {offset} does not address a grid column")
        ys = np.arange(geom.ny) * d - geom.center[1]
        return Profile(ys, grid[:, ix].copy(), "y", float(cols[ix]))
    if axis == "diag":
        # Sites (i, i+k) with k chosen so the line passes through the axis.
        k = round((geom.center[1] - geom.center[0]) / d)
        i = np.arange(max(0, -k), min(geom.nx, geom.ny - k))
        if i.size == 0:
            raise ValueError("diagonal through the rotation axis misses the grid")
        x = i * d - geom.center[0]
        y = (i + k) * d - geom.center[1]
        coords = (x + y) / np.sqrt(2.0)
        return Profile(coords, grid[i + k, i].copy(), "diag", float(k))
    raise ValueError(f"axis must be 'x', 'y' or 'diag', got {axis!r}")


def boundary_mass(field: ScalarField, margin: int = 3) -> float:
    """Fraction of a nonnegative field within `margin` sites of any edge.

    Normalized by the field's total, so a unit-normalized density gives the
    escape-indicator probability mass directly.
    """
    geom = field.geom
    if margin < 1 or 2 * margin >= min(geom.nx, geom.ny):
        raise ValueError(
            f"margin must satisfy 1 <= margin < min(nx, ny)/2, got {margin}")
    total = float(field.values.sum())
    if total <= 0:
        raise ValueError("boundary fraction undefined for a field with zero total")
    grid = field.as_grid()
    w = margin
    interior = grid[w:geom.ny - w, w:geom.nx - w]
    inner = float(interior.sum()) if interior.size else 0.0
    return (total - inner) / total


def rotated_90(field: ScalarField) -> ScalarField:
    """Field rotated counterclockwise by 90 degrees about the grid center
    (square grids only): the value at (x, y) moves to (-y, x)."""
    geom = field.geom
    if geom.nx != geom.ny:
        raise ValueError("90-degree rotation needs a square grid")
    return ScalarField(geom, np.rot90(field.as_grid(), -1).reshape(-1).copy())
