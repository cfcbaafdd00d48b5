"""CSV/JSON writers for run outputs.

Schemas (headers are literal):
  scalar field : ix,iy,x,y,value
  bond field   : ix,iy,direction,x_mid,y_mid,value      direction in {+x,+y}
  profile      : coordinate,value
  spectrum     : index,energy,energy_shifted[,analytic_energy,j,k]
  sweep        : bigomega,energy,energy_shifted,boundary_mass,verdict
  containment  : level,nx,ny,spacing,energy,energy_shifted,boundary_mass,ground_multiplet_size

Every CSV gets a same-stem .json sidecar embedding the fully resolved config,
so a run is reproducible from its outputs alone.  All floats are written with
repr-fidelity (%.17g); writers are deterministic for identical inputs.
"""

from __future__ import annotations

import json
import os

from .observables import BondField, Profile, ScalarField


def fmt(v: float) -> str:
    return f"{float(v):.17g}"


def run_stem(command: str, cfg) -> str:
    """Canonical output stem: sortable and collision-free across sweeps."""
    if cfg.bigomegas:
        om_part = f"Om{min(cfg.bigomegas):.4f}-{max(cfg.bigomegas):.4f}"
    else:
        om_part = f"Om{cfg.bigomega:.4f}"
    return (f"{command}_{cfg.model}_nx{cfg.nx}_ny{cfg.ny}"
            f"_om{cfg.omega:.4f}_{om_part}")


def write_scalar_field_csv(path, field: ScalarField) -> None:
    geom = field.geom
    grid = field.as_grid()
    with open(path, "w") as fh:
        fh.write("ix,iy,x,y,value\n")
        for iy in range(geom.ny):
            y = iy * geom.spacing - geom.center[1]
            for ix in range(geom.nx):
                x = ix * geom.spacing - geom.center[0]
                fh.write(f"{ix},{iy},{fmt(x)},{fmt(y)},{fmt(grid[iy, ix])}\n")


def write_bond_field_csv(path, bonds: BondField) -> None:
    geom = bonds.geom
    d = geom.spacing
    with open(path, "w") as fh:
        fh.write("ix,iy,direction,x_mid,y_mid,value\n")
        for (p, q), vals, direction in (
            (geom.bonds_x, bonds.x_values, "+x"),
            (geom.bonds_y, bonds.y_values, "+y"),
        ):
            for pi, v in zip(p, vals):
                ix, iy = pi % geom.nx, pi // geom.nx
                x = ix * d - geom.center[0]
                y = iy * d - geom.center[1]
                xm = x + d / 2 if direction == "+x" else x
                ym = y + d / 2 if direction == "+y" else y
                fh.write(f"{ix},{iy},{direction},{fmt(xm)},{fmt(ym)},{fmt(v)}\n")


def write_profile_csv(path, profile: Profile) -> None:
    with open(path, "w") as fh:
        fh.write("coordinate,value\n")
        for c, v in zip(profile.coords, profile.values):
            fh.write(f"{fmt(c)},{fmt(v)}\n")


def write_spectrum_csv(path, energies, shifted, analytic=None) -> None:
    """analytic: optional list of (E, j, k) rows aligned with the energies."""
    with open(path, "w") as fh:
        if analytic is None:
            fh.write("index,energy,energy_shifted\n")
            for i, (e, s) in enumerate(zip(energies, shifted)):
                fh.write(f"{i},{fmt(e)},{fmt(s)}\n")
        else:
            fh.write("index,energy,energy_shifted,analytic_energy,j,k\n")
            for i, ((e, s), (ea, j, k)) in enumerate(zip(zip(energies, shifted), analytic)):
                fh.write(f"{i},{fmt(e)},{fmt(s)},{fmt(ea)},{j},{k}\n")


def write_sweep_csv(path, rows) -> None:
    with open(path, "w") as fh:
        fh.write("bigomega,energy,energy_shifted,boundary_mass,verdict\n")
        for r in rows:
            fh.write(f"{fmt(r['bigomega'])},{fmt(r['energy'])},"
                     f"{fmt(r['energy_shifted'])},{fmt(r['boundary_mass'])},"
                     f"{r['verdict']}\n")


def write_containment_csv(path, report) -> None:
    with open(path, "w") as fh:
        fh.write("level,nx,ny,spacing,energy,energy_shifted,boundary_mass,"
                 "ground_multiplet_size\n")
        for i, r in enumerate(report.runs):
            fh.write(f"{i},{r['nx']},{r['ny']},{fmt(r['spacing'])},"
                     f"{fmt(r['energy'])},{fmt(r['energy_shifted'])},"
                     f"{fmt(r['boundary_mass'])},{r['ground_multiplet_size']}\n")


def write_sidecar(csv_path, command: str, cfg, outputs, results: dict,
                  solver: dict | None = None) -> str:
    """JSON sidecar next to a CSV: resolved config + results + solver info."""
    from . import __version__

    payload = {
        "command": command,
        "version": __version__,
        "config": cfg.to_dict(),
        "outputs": [os.path.basename(p) for p in outputs],
        "results": results,
    }
    if solver is not None:
        payload["solver"] = solver
    path = os.path.splitext(csv_path)[0] + ".json"
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
