"""rotlat: a trapped quantum particle on a rotating 2D lattice.

Single-particle solver contrasting a tight-binding lattice against the
discretized rotating-frame continuum: spectra, densities, bond currents,
fermionic filling, and containment diagnostics under mesh/size refinement.
"""

__version__ = "0.1.0"

from .geometry import LatticeGeometry, rotation_factor_k
from .hamiltonian import (BandInflectionError, ModelParams, SparseHermitianMatrix,
                          analytic_levels, analytic_spectrum, band_bottom_shift,
                          build, build_discretized_continuum, build_hubbard,
                          effective_mass, rotation_weights, trap_potential)
from .eigensolver import (ConvergenceError, EigenSolution, cluster_multiplets,
                          dense_oracle, solve_lowest)
from .observables import (BondField, Profile, ScalarField, bond_currents,
                          boundary_mass, cross_section, density, fermion_density,
                          fermion_occupancies, ground_density,
                          multiplet_average_density, rotated_90)
from .diagnostics import (ContainmentReport, ContainmentThresholds, SweepResult,
                          ThresholdResult, density_l1_distance, escape_threshold,
                          omega_sweep, refinement_scan)
from .config import DEFAULT_SPACING, ConfigError, RunConfig

__all__ = [name for name in dir() if not name.startswith("_")]
