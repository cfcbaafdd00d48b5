"""Command-line interface.

Subcommands: spectrum | density | currents | fermions | contain | sweep.
Configuration precedence: built-in defaults < --config file < explicit flags.
Exit codes: 0 success, 1 solver/domain failure, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from .config import ConfigError, RunConfig, load_config_file, merge_config
from .diagnostics import (ContainmentThresholds, escape_threshold, omega_sweep,
                          refinement_scan)
from .eigensolver import ConvergenceError, solve_lowest
from .geometry import LatticeGeometry
from .hamiltonian import (ModelParams, analytic_levels, band_bottom_shift, build,
                          _canonical_kind)
from .observables import (bond_currents, boundary_mass, cross_section,
                          fermion_density, ground_density)
from . import output


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="optional config file (JSON or key=value lines)")
    p.add_argument("--model", choices=["hubbard", "lattice", "continuum",
                                       "discretized-continuum"])
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--spacing", "--h", "--d", dest="spacing", type=float,
                   help="lattice constant d / mesh size h (default 1/sqrt(2))")
    p.add_argument("--t", type=float)
    p.add_argument("--omega", type=float, help="trap frequency")
    p.add_argument("--bigomega", type=float, help="rotation frequency")
    p.add_argument("--n-states", dest="n_states", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--gap-tol", dest="gap_tol", type=float)
    p.add_argument("--eps-energy", dest="eps_energy", type=float)
    p.add_argument("--eps-density", dest="eps_density", type=float)
    p.add_argument("--eps-boundary", dest="eps_boundary", type=float)
    p.add_argument("--margin", type=int)
    p.add_argument("--outdir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotlat",
        description="Trapped single particle on a rotating 2D lattice / discretized plane.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="lowest eigenvalues (+ closed-form column "
                        "for the continuum below the critical rotation)")
    _common_flags(sp)
    sp.add_argument("--dump-matrix", dest="dump_matrix", action="store_const",
                    const=True, help="also dump the assembled matrix triplets")

    dp = sub.add_parser("density", help="ground-multiplet density and cross-sections")
    _common_flags(dp)

    cp = sub.add_parser("currents", help="bond currents of a selected eigenstate")
    _common_flags(cp)
    cp.add_argument("--state", type=int, help="eigenstate index (default 0)")

    fp = sub.add_parser("fermions", help="total density of N noninteracting fermions")
    _common_flags(fp)
    fp.add_argument("--n-fermions", dest="n_fermions", type=int)

    kp = sub.add_parser("contain", help="containment verdict: refinement scan or "
                        "escape-threshold bisection")
    _common_flags(kp)
    kp.add_argument("--axis", choices=["mesh", "lattice_size"])
    kp.add_argument("--levels", nargs="+", type=float,
                    help="mesh spacings or lattice sizes")
    kp.add_argument("--bracket", nargs=2, type=float, metavar=("LO", "HI"),
                    help="bisect the escape threshold inside [LO, HI] instead")
    kp.add_argument("--bisect-tol", dest="bisect_tol", type=float)

    wp = sub.add_parser("sweep", help="ground energy and boundary mass vs rotation")
    _common_flags(wp)
    wp.add_argument("--bigomegas", nargs="+", type=float)

    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    flag_values = {k: v for k, v in vars(args).items() if k != "command"}
    file_values = None
    config_path = flag_values.pop("config", None)
    if config_path:
        file_values = load_config_file(config_path)
    cfg = merge_config(file_values, flag_values)
    cfg.model = _canonical_kind(cfg.model)
    cfg.validate()
    return cfg


def _geometry(cfg: RunConfig) -> LatticeGeometry:
    return LatticeGeometry(cfg.nx, cfg.ny, cfg.spacing)


def _params(cfg: RunConfig, bigomega=None) -> ModelParams:
    return ModelParams(kind=cfg.model, t=cfg.t, omega=cfg.omega,
                       bigomega=cfg.bigomega if bigomega is None else bigomega)


def _thresholds(cfg: RunConfig) -> ContainmentThresholds:
    return ContainmentThresholds(eps_energy=cfg.eps_energy,
                                 eps_density=cfg.eps_density,
                                 eps_boundary=cfg.eps_boundary,
                                 margin=cfg.margin)


def _solve(cfg: RunConfig, n_states: int):
    geom = _geometry(cfg)
    params = _params(cfg)
    matrix = build(geom, params)
    sol = solve_lowest(matrix, m=n_states, tol=cfg.tol, seed=cfg.seed,
                       gap_tol=cfg.gap_tol)
    return geom, params, matrix, sol


def _outpath(cfg: RunConfig, stem: str, suffix: str = ".csv") -> str:
    os.makedirs(cfg.outdir, exist_ok=True)
    return os.path.join(cfg.outdir, stem + suffix)


# -- command handlers ------------------------------------------------------------


def cmd_spectrum(cfg: RunConfig) -> int:
    n = cfg.resolved_n_states()
    geom, params, matrix, sol = _solve(cfg, n)
    shift = band_bottom_shift(geom, params)
    shifted = sol.eigenvalues + shift
    analytic = None
    if params.kind == "continuum" and params.bigomega <= params.omega:
        analytic = analytic_levels(params.omega, params.bigomega, n)
    stem = output.run_stem("spectrum", cfg)
    path = _outpath(cfg, stem)
    output.write_spectrum_csv(path, sol.eigenvalues, shifted, analytic)
    outputs = [path]
    if cfg.dump_matrix:
        mpath = _outpath(cfg, stem + "_matrix")
        matrix.dump_coo_csv(mpath)
        outputs.append(mpath)
    output.write_sidecar(path, "spectrum", cfg, outputs, {
        "energies": [float(e) for e in sol.eigenvalues],
        "energies_shifted": [float(e) for e in shifted],
        "multiplets": sol.multiplets,
    }, sol.diagnostics)
    print(f"spectrum: {n} states, E_g={sol.eigenvalues[0]:.9g} "
          f"(shifted {shifted[0]:.9g}) -> {path}")
    return 0


def cmd_density(cfg: RunConfig) -> int:
    n = cfg.resolved_n_states()
    geom, params, _, sol = _solve(cfg, n)
    rho = ground_density(geom, sol)
    stem = output.run_stem("density", cfg)
    path = _outpath(cfg, stem)
    output.write_scalar_field_csv(path, rho)
    outputs = [path]
    for axis, tag in (("x", "cut_x"), ("y", "cut_y"), ("diag", "cut_diag")):
        ppath = _outpath(cfg, f"{stem}_{tag}")
        output.write_profile_csv(ppath, cross_section(rho, axis, 0.0))
        outputs.append(ppath)
    bmass = boundary_mass(rho, cfg.margin)
    output.write_sidecar(path, "density", cfg, outputs, {
        "energy": float(sol.eigenvalues[0]),
        "ground_multiplet_size": len(sol.multiplets[0]),
        "boundary_mass": bmass,
    }, sol.diagnostics)
    print(f"density: ground multiplet size {len(sol.multiplets[0])}, "
          f"boundary mass {bmass:.3g} -> {path}")
    return 0


def cmd_currents(cfg: RunConfig) -> int:
    n = max(cfg.resolved_n_states(), cfg.state + 1)
    geom, params, _, sol = _solve(cfg, n)
    state = sol.eigenvectors[:, cfg.state]
    bonds = bond_currents(geom, params, state)
    net = bonds.net_site_outflow()
    stem = output.run_stem("currents", cfg)
    path = _outpath(cfg, stem)
    output.write_bond_field_csv(path, bonds)
    npath = _outpath(cfg, stem + "_net")
    from .observables import ScalarField
    output.write_scalar_field_csv(npath, ScalarField(geom, net))
    output.write_sidecar(path, "currents", cfg, [path, npath], {
        "state": cfg.state,
        "energy": float(sol.eigenvalues[cfg.state]),
        "max_bond_current": float(max(np.abs(bonds.x_values).max(),
                                      np.abs(bonds.y_values).max())),
        "max_net_site_current": float(np.abs(net).max()),
    }, sol.diagnostics)
    print(f"currents: state {cfg.state}, max |J|="
          f"{max(np.abs(bonds.x_values).max(), np.abs(bonds.y_values).max()):.3g}, "
          f"max net {np.abs(net).max():.3g} -> {path}")
    return 0


def cmd_fermions(cfg: RunConfig) -> int:
    if cfg.n_fermions is None:
        raise ConfigError("n_fermions", "the fermions command requires --n-fermions")
    n = cfg.resolved_n_states()
    geom, params, _, sol = _solve(cfg, n)
    rho = fermion_density(geom, sol, cfg.n_fermions)
    stem = output.run_stem("fermions", cfg)
    path = _outpath(cfg, stem)
    output.write_scalar_field_csv(path, rho)
    cpath = _outpath(cfg, stem + "_cut_x")
    cut = cross_section(rho, "x", 0.0)
    output.write_profile_csv(cpath, cut)
    output.write_sidecar(path, "fermions", cfg, [path, cpath], {
        "n_fermions": cfg.n_fermions,
        "total": float(rho.values.sum()),
        "fermi_energy": float(sol.eigenvalues[cfg.n_fermions - 1]),
        "boundary_mass_fraction": boundary_mass(rho, cfg.margin),
    }, sol.diagnostics)
    print(f"fermions: N={cfg.n_fermions}, total {rho.values.sum():.6f} -> {path}")
    return 0


def cmd_contain(cfg: RunConfig) -> int:
    geom = _geometry(cfg)
    params = _params(cfg)
    thr = _thresholds(cfg)
    stem = output.run_stem("contain", cfg)
    if cfg.bracket is not None:
        result = escape_threshold(params, geom, cfg.bracket[0], cfg.bracket[1],
                                  bisect_tol=cfg.bisect_tol, thresholds=thr,
                                  n_states=cfg.resolved_n_states() if cfg.n_states else 6,
                                  tol=cfg.tol, seed=cfg.seed, gap_tol=cfg.gap_tol)
        path = _outpath(cfg, stem + "_threshold")
        with open(path, "w") as fh:
            fh.write("lo,hi,value,evaluations\n")
            fh.write(f"{output.fmt(result.lo)},{output.fmt(result.hi)},"
                     f"{output.fmt(result.value)},{result.evaluations}\n")
        output.write_sidecar(path, "contain", cfg, [path], result.to_dict())
        print(f"contain: escape threshold in [{result.lo:.6g}, {result.hi:.6g}] "
              f"-> {path}")
        return 0
    if not cfg.levels:
        raise ConfigError("levels", "the contain command needs --levels or --bracket")
    levels = cfg.levels if cfg.axis == "mesh" else [int(v) for v in cfg.levels]
    report = refinement_scan(params, geom, cfg.axis, levels, thresholds=thr,
                             n_states=cfg.resolved_n_states() if cfg.n_states else 8,
                             tol=cfg.tol, seed=cfg.seed, gap_tol=cfg.gap_tol)
    path = _outpath(cfg, stem)
    output.write_containment_csv(path, report)
    output.write_sidecar(path, "contain", cfg, [path], report.to_dict())
    print(f"contain: verdict {report.verdict} "
          f"(dE={report.energy_sensitivity:.3g}, dRho={report.density_sensitivity:.3g}, "
          f"boundary={report.max_boundary_mass:.3g}) -> {path}")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.bigomegas:
        raise ConfigError("bigomegas", "the sweep command requires --bigomegas")
    geom = _geometry(cfg)
    params = _params(cfg)
    result = omega_sweep(params, geom, cfg.bigomegas, thresholds=_thresholds(cfg),
                         n_states=cfg.resolved_n_states() if cfg.n_states else 6,
                         tol=cfg.tol, seed=cfg.seed, gap_tol=cfg.gap_tol)
    stem = output.run_stem("sweep", cfg)
    path = _outpath(cfg, stem)
    output.write_sweep_csv(path, result.rows)
    output.write_sidecar(path, "sweep", cfg, [path], result.to_dict())
    if not result.monotone:
        print("warning: containment verdict is not monotone across the sweep "
              "(suspect solver failure)", file=sys.stderr)
    print(f"sweep: {len(result.rows)} points -> {path}")
    return 0


_HANDLERS = {
    "spectrum": cmd_spectrum,
    "density": cmd_density,
    "currents": cmd_currents,
    "fermions": cmd_fermions,
    "contain": cmd_contain,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return _HANDLERS[args.command](cfg)
    except ConfigError as err:
        print(f"error: invalid configuration -- {err}", file=sys.stderr)
        return 2
    except ConvergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
