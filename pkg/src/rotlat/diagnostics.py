"""Containment diagnostics: refinement scans, rotation sweeps, escape threshold.

The question these tools answer: does the trapped ground state stay put when
the description is refined?  A physical bound state is insensitive to adding
more lattice (bigger grid at fixed spacing) and, for a genuine continuum
problem, to refining the mesh.  A state that only *looks* bound because the
discretization cannot resolve its escape channel gives itself away here: its
energy keeps dropping and its density migrates to the boundary as h shrinks.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .geometry import LatticeGeometry
from .hamiltonian import ModelParams, band_bottom_shift, build
from .eigensolver import ConvergenceError, solve_lowest
from .observables import ScalarField, boundary_mass, ground_density


@dataclass(frozen=True)
class ContainmentThresholds:
    """Verdict tolerances; defaults separate the contained/escaping regimes
    by orders of magnitude for matched-grid comparisons."""

    eps_energy: float = 1e-4      # max pairwise ground-energy drift, units of t
    eps_density: float = 1e-3     # max pairwise L1 distance of ground densities
    eps_boundary: float = 1e-6    # max boundary-mass fraction at any level
    margin: int = 3               # boundary margin in sites

    def __post_init__(self):
        for name in ("eps_energy", "eps_density", "eps_boundary"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.margin < 1:
            raise ValueError("margin must be >= 1")


@dataclass
class ContainmentReport:
    axis: str                      # "mesh" | "lattice_size"
    runs: list = field(default_factory=list)   # one dict per refinement level
    energy_sensitivity: float = float("nan")
    density_sensitivity: float = float("nan")
    max_boundary_mass: float = float("nan")
    supercritical_margin: float = 0.0          # sqrt(max(Omega^2 - omega^2, 0))
    verdict: str = "unknown"                   # "contained" | "escaping"
    thresholds: ContainmentThresholds = field(default_factory=ContainmentThresholds)
    complete: bool = True

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["thresholds"] = dataclasses.asdict(self.thresholds)
        return d


def _solve_level(params: ModelParams, geom: LatticeGeometry, n_states, tol, seed,
                 gap_tol):
    matrix = build(geom, params)
    sol = solve_lowest(matrix, m=n_states, tol=tol, seed=seed, gap_tol=gap_tol)
    return sol


def _level_record(params, geom, sol, thresholds):
    rho = ground_density(geom, sol)
    return {
        "nx": geom.nx,
        "ny": geom.ny,
        "spacing": geom.spacing,
        "energy": float(sol.eigenvalues[0]),
        "energy_shifted": float(sol.eigenvalues[0] + band_bottom_shift(geom, params)),
        "boundary_mass": boundary_mass(rho, thresholds.margin),
        "ground_multiplet_size": len(sol.multiplets[0]),
    }, rho


def density_l1_distance(a: ScalarField, b: ScalarField) -> float:
    """L1 distance of two site densities on their common physical window.

    Both fields are converted to per-area densities, sampled (bilinearly) at
    the coarser grid's sites inside the shared centered window, renormalized
    there, and compared.  When the two grids share sites (same spacing, same
    parity) the sampling is exact and this reduces to a direct site sum.
    """
    fine, coarse = (a, b) if a.geom.spacing <= b.geom.spacing else (b, a)

    def axes(geom):
        xs = np.arange(geom.nx) * geom.spacing - geom.center[0]
        ys = np.arange(geom.ny) * geom.spacing - geom.center[1]
        return xs, ys

    xa, ya = axes(a.geom)
    xb, yb = axes(b.geom)
    lox, hix = max(xa[0], xb[0]), min(xa[-1], xb[-1])
    loy, hiy = max(ya[0], yb[0]), min(ya[-1], yb[-1])
    if lox >= hix or loy >= hiy:
        raise ValueError("grids share no physical window")

    xc, yc = axes(coarse.geom)
    eps = 1e-9 * coarse.geom.spacing
    keep_x = xc[(xc >= lox - eps) & (xc <= hix + eps)].clip(lox, hix)
    keep_y = yc[(yc >= loy - eps) & (yc <= hiy + eps)].clip(loy, hiy)
    px, py = np.meshgrid(keep_x, keep_y, indexing="xy")
    points = np.column_stack([py.ravel(), px.ravel()])   # (y, x) ordering

    sampled = []
    for f in (a, b):
        xs, ys = axes(f.geom)
        per_area = f.as_grid() / f.geom.spacing**2
        interp = RegularGridInterpolator((ys, xs), per_area, method="linear")
        v = interp(points)
        total = v.sum()
        if total <= 0:
            raise ValueError("density vanishes on the common window")
        sampled.append(v / total)
    return float(np.abs(sampled[0] - sampled[1]).sum())


def refinement_scan(params: ModelParams, base_geom: LatticeGeometry, axis: str,
                    levels, *, thresholds: ContainmentThresholds | None = None,
                    n_states: int = 8, tol: float = 1e-10, seed: int = 7,
                    gap_tol: float = 1e-6) -> ContainmentReport:
    """Solve the same physical problem at several refinement levels and judge
    containment from the cross-level insensitivity of energy and density.

    axis="mesh": levels are spacings; the physical extent of base_geom is
    held fixed and grids are re-sized accordingly (continuum use).
    axis="lattice_size": levels are grid sizes (ints or (nx, ny) tuples) at
    the base spacing (lattice use).  Solver failure at any level re-raises
    ConvergenceError with the partial report attached.
    """
    thr = thresholds or ContainmentThresholds()
    if axis not in ("mesh", "lattice_size"):
        raise ValueError(f"axis must be 'mesh' or 'lattice_size', got {axis!r}")
    if len(levels) < 2:
        raise ValueError("need at least two refinement levels to compare")

    geoms = []
    if axis == "mesh":
        sx = (base_geom.nx - 1) * base_geom.spacing
        sy = (base_geom.ny - 1) * base_geom.spacing
        for h in levels:
            if not h > 0:
                raise ValueError(f"mesh spacing must be positive, got {h}")
            geoms.append(LatticeGeometry(round(sx / h) + 1, round(sy / h) + 1, float(h)))
    else:
        for size in levels:
            nx, ny = (size, size) if np.isscalar(size) else size
            geoms.append(LatticeGeometry(int(nx), int(ny), base_geom.spacing))

    report = ContainmentReport(axis=axis, thresholds=thr)
    report.supercritical_margin = float(
        np.sqrt(max(params.bigomega**2 - params.omega**2, 0.0)))
    densities = []
    for geom in geoms:
        try:
            sol = _solve_level(params, geom, n_states, tol, seed, gap_tol)
        except ConvergenceError as err:
            report.complete = False
            report.verdict = "unknown"
            err.partial = report
            raise
        rec, rho = _level_record(params, geom, sol, thr)
        report.runs.append(rec)
        densities.append(rho)

    energies = [r["energy_shifted"] for r in report.runs]
    pairs = [(i, j) for i in range(len(geoms)) for j in range(i + 1, len(geoms))]
    report.energy_sensitivity = max(abs(energies[i] - energies[j]) for i, j in pairs)
    report.density_sensitivity = max(
        density_l1_distance(densities[i], densities[j]) for i, j in pairs)
    report.max_boundary_mass = max(r["boundary_mass"] for r in report.runs)
    contained = (report.energy_sensitivity <= thr.eps_energy
                 and report.density_sensitivity <= thr.eps_density
                 and report.max_boundary_mass <= thr.eps_boundary)
    report.verdict = "contained" if contained else "escaping"
    return report


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)
    monotone: bool = True     # once escaping, never contained again at larger Omega

    def to_dict(self) -> dict:
        return {"rows": self.rows, "monotone": self.monotone}


def omega_sweep(params: ModelParams, geom: LatticeGeometry, bigomegas, *,
                thresholds: ContainmentThresholds | None = None, n_states: int = 6,
                tol: float = 1e-10, seed: int = 7, gap_tol: float = 1e-6) -> SweepResult:
    """Ground energy and boundary mass across rotation frequencies.

    The per-point verdict is the coarse single-grid criterion (boundary mass
    below threshold); energy_shifted adds the band-bottom shift so lattice
    curves sit on the continuum scale.  A non-monotone verdict sequence
    (escaping then contained again) is flagged: it indicates solver trouble,
    not physics.
    """
    thr = thresholds or ContainmentThresholds()
    bigomegas = [float(om) for om in bigomegas]
    if any(b <= a for a, b in zip(bigomegas, bigomegas[1:])):
        raise ValueError("bigomegas must be strictly ascending")
    result = SweepResult()
    escaped = False
    for om in bigomegas:
        p = dataclasses.replace(params, bigomega=float(om))
        sol = _solve_level(p, geom, n_states, tol, seed, gap_tol)
        rec, rho = _level_record(p, geom, sol, thr)
        verdict = "contained" if rec["boundary_mass"] <= thr.eps_boundary else "escaping"
        result.rows.append({
            "bigomega": float(om),
            "energy": rec["energy"],
            "energy_shifted": rec["energy_shifted"],
            "boundary_mass": rec["boundary_mass"],
            "verdict": verdict,
        })
        if verdict == "escaping":
            escaped = True
        elif escaped:
            result.monotone = False
    return result


@dataclass
class ThresholdResult:
    lo: float                  # largest rotation frequency observed contained
    hi: float                  # smallest rotation frequency observed escaping
    value: float               # reported threshold: the hi endpoint
    evaluations: int = 0

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def escape_threshold(params: ModelParams, geom: LatticeGeometry, lo: float,
                     hi: float, *, bisect_tol: float = 1e-3,
                     thresholds: ContainmentThresholds | None = None,
                     n_states: int = 6, tol: float = 1e-10, seed: int = 7,
                     gap_tol: float = 1e-6) -> ThresholdResult:
    """Bisect the coarse containment verdict between a contained lo and an
    escaping hi; the bracket must straddle the transition or this raises."""
    thr = thresholds or ContainmentThresholds()
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if bisect_tol <= 0:
        raise ValueError("bisect_tol must be positive")

    evals = 0

    def contained_at(om: float) -> bool:
        nonlocal evals
        p = dataclasses.replace(params, bigomega=float(om))
        sol = _solve_level(p, geom, n_states, tol, seed, gap_tol)
        rho = ground_density(geom, sol)
        evals += 1
        return boundary_mass(rho, thr.margin) <= thr.eps_boundary

    if not contained_at(lo):
        raise ValueError(f"bracket low end {lo} is not contained")
    if contained_at(hi):
        raise ValueError(f"bracket high end {hi} does not escape")
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if contained_at(mid):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(lo=lo, hi=hi, value=hi, evaluations=evals)
