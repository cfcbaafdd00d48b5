import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rotlat import LatticeGeometry, ModelParams, build
from rotlat.eigensolver import EigenSolution, cluster_multiplets, dense_oracle, solve_lowest
from rotlat.observables import (
    ScalarField,
    bond_currents,
    boundary_mass,
    cross_section,
    density,
    fermion_density,
    fermion_occupancies,
    ground_density,
    multiplet_average_density,
    rotated_90,
)


def normalized_state(n, rng):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def synthetic_solution(eigenvalues, eigenvectors, gap_tol=1e-6):
    ev = np.asarray(eigenvalues, dtype=float)
    return EigenSolution(
        eigenvalues=ev,
        eigenvectors=np.asarray(eigenvectors, dtype=complex),
        residuals=np.zeros(len(ev)),
        multiplets=cluster_multiplets(ev, gap_tol),
        diagnostics={},
    )


def test_density_normalization_and_layout():
    g = LatticeGeometry(4, 3, 0.5)
    rng = np.random.default_rng(0)
    psi = normalized_state(g.site_count, rng)
    rho = density(g, psi)
    assert rho.values.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(rho.values >= 0)
    grid = rho.as_grid()
    assert grid.shape == (3, 4)
    assert grid[2, 1] == rho.values[g.site_index((1, 2))]


def test_nonrotating_ground_state_peaks_at_center():
    g = LatticeGeometry(40, 40, 2**-0.5)
    sol = solve_lowest(build(g, ModelParams(kind="hubbard", omega=0.1)), 2, tol=1e-10)
    grid = ground_density(g, sol).as_grid()
    iy, ix = np.unravel_index(np.argmax(grid), grid.shape)
    assert (ix, iy) in {(19, 19), (19, 20), (20, 19), (20, 20)}
    row = grid[iy, :]
    assert np.all(np.diff(row[ix:]) < 0)      # monotone decay to the right
    assert np.all(np.diff(row[:ix + 1]) > 0)  # and rise from the left


# --- bond currents -----------------------------------------------------------

@settings(deadline=None, max_examples=40)
@given(st.integers(0, 10**6), st.sampled_from(["hubbard", "continuum"]))
def test_net_outflow_equals_density_rate(salt, kind):
    """For any normalized state, summed bond currents out of a site must equal
    the rate -2 Im(conj(psi) (H psi)) given by the Schroedinger equation; this
    pins both the hopping and the rotational term of the current formula."""
    rng = np.random.default_rng(salt)
    g = LatticeGeometry(int(rng.integers(3, 8)), int(rng.integers(3, 8)), 0.6)
    params = ModelParams(kind=kind, t=float(rng.uniform(0.5, 2.0)),
                         omega=float(rng.uniform(0, 0.5)),
                         bigomega=float(rng.uniform(0, 0.5)))
    psi = normalized_state(g.site_count, rng)
    J = bond_currents(g, params, psi)
    H = build(g, params)
    rate = -2.0 * np.imag(np.conj(psi) * H.matvec(psi))
    assert np.max(np.abs(J.net_site_outflow() - rate)) < 1e-13 * H.one_norm()


def test_eigenstate_currents_are_divergence_free():
    g = LatticeGeometry(14, 14, 2**-0.5)
    params = ModelParams(kind="hubbard", omega=0.15, bigomega=0.1)
    sol = solve_lowest(build(g, params), 5, tol=1e-12)
    for i in range(5):
        J = bond_currents(g, params, sol.eigenvectors[:, i])
        assert np.max(np.abs(J.net_site_outflow())) < 1e-9


def test_no_rotation_means_no_current():
    g = LatticeGeometry(12, 12, 0.8)
    params = ModelParams(kind="hubbard", omega=0.2)
    # a manifestly real wavefunction carries exactly zero current
    rng = np.random.default_rng(4)
    real_psi = rng.normal(size=g.site_count).astype(complex)
    real_psi /= np.linalg.norm(real_psi)
    J = bond_currents(g, params, real_psi)
    assert np.max(np.abs(J.x_values)) == 0.0
    assert np.max(np.abs(J.y_values)) == 0.0
    # the solved ground state is real only up to solver noise and phase
    sol = solve_lowest(build(g, params), 1, tol=1e-11)
    J = bond_currents(g, params, sol.eigenvectors[:, 0])
    assert np.max(np.abs(J.x_values)) < 1e-12
    assert np.max(np.abs(J.y_values)) < 1e-12


def test_bond_value_antisymmetric_lookup():
    g = LatticeGeometry(5, 5, 1.0)
    params = ModelParams(kind="hubbard", omega=0.1, bigomega=0.2)
    psi = normalized_state(25, np.random.default_rng(9))
    J = bond_currents(g, params, psi)
    for a, b, _ in g.bonds():
        assert J.value(a, b) == -J.value(b, a)
    with pytest.raises(ValueError):
        J.value((0, 0), (2, 0))


# --- multiplet averaging -----------------------------------------------------

@settings(deadline=None, max_examples=30)
@given(st.integers(0, 10**6))
def test_multiplet_average_is_basis_independent(salt):
    rng = np.random.default_rng(salt)
    g = LatticeGeometry(4, 5, 1.0)
    n = g.site_count
    q, _ = np.linalg.qr(rng.normal(size=(n, 3)) + 1j * rng.normal(size=(n, 3)))
    u, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    ev = np.array([0.5, 0.5, 0.5])
    a = synthetic_solution(ev, q)
    b = synthetic_solution(ev, q @ u)
    rho_a = multiplet_average_density(g, a, [0, 1, 2])
    rho_b = multiplet_average_density(g, b, [0, 1, 2])
    assert np.max(np.abs(rho_a.values - rho_b.values)) < 1e-13


def test_singleton_average_is_plain_density():
    g = LatticeGeometry(3, 3, 1.0)
    rng = np.random.default_rng(2)
    psi = normalized_state(9, rng)
    sol = synthetic_solution([1.0], psi[:, None])
    avg = multiplet_average_density(g, sol, [0])
    assert np.array_equal(avg.values, density(g, psi).values)


def test_empty_cluster_rejected():
    g = LatticeGeometry(3, 3, 1.0)
    sol = synthetic_solution([1.0], np.eye(9, 1, dtype=complex))
    with pytest.raises(ValueError):
        multiplet_average_density(g, sol, [])


# --- fermion filling ---------------------------------------------------------

def test_fractional_fermi_multiplet():
    # one fermion into an exactly twofold-degenerate bottom level
    vecs = np.eye(6, 4, dtype=complex)
    sol = synthetic_solution([0.0, 0.0, 1.0, 2.0], vecs)
    occ = fermion_occupancies(sol, 1)
    assert np.allclose(occ, [0.5, 0.5, 0.0, 0.0])
    assert np.allclose(fermion_occupancies(sol, 3), [1.0, 1.0, 1.0, 0.0])
    # Fermi level inside a twofold multiplet higher up
    sol2 = synthetic_solution([0.0, 1.0, 1.0, 2.0], np.eye(6, 4, dtype=complex))
    assert np.allclose(fermion_occupancies(sol2, 2), [1.0, 0.5, 0.5, 0.0])


def test_filling_all_orbitals_gives_uniform_density():
    g = LatticeGeometry(4, 4, 1.0)
    sol = dense_oracle(build(g, ModelParams(kind="hubbard", omega=0.3, bigomega=0.1)))
    rho = fermion_density(g, sol, 16)
    assert np.allclose(rho.values, 1.0, atol=1e-10)


def test_occupancies_sum_to_particle_number():
    vecs = np.eye(8, 6, dtype=complex)
    sol = synthetic_solution([0.0, 0.1, 0.1, 0.1, 0.4, 0.7], vecs)
    for nf in range(1, 6):
        assert fermion_occupancies(sol, nf).sum() == pytest.approx(nf)


@settings(deadline=None, max_examples=20)
@given(st.integers(0, 10**6))
def test_density_monotone_under_filling(salt):
    rng = np.random.default_rng(salt)
    g = LatticeGeometry(3, 4, 1.0)
    sol = dense_oracle(build(g, ModelParams(
        kind="hubbard", omega=float(rng.uniform(0, 0.4)),
        bigomega=float(rng.uniform(0, 0.3)))))
    prev = np.zeros(g.site_count)
    for nf in range(1, 13):
        rho = fermion_density(g, sol, nf).values
        assert np.all(rho - prev > -1e-12)
        prev = rho


def test_unresolved_fermi_multiplet_rejected():
    # the partially filled level sits at the end of the computed window on a
    # bigger matrix, so its degeneracy might continue past what we computed
    vecs = np.eye(9, 3, dtype=complex)
    sol = synthetic_solution([0.0, 1.0, 1.0], vecs)
    with pytest.raises(ValueError):
        fermion_occupancies(sol, 2)
    with pytest.raises(ValueError):
        fermion_occupancies(sol, 5)     # more fermions than computed states
    with pytest.raises(ValueError):
        fermion_occupancies(sol, 0)


# --- cross sections ----------------------------------------------------------

def test_cross_section_extracts_rows_and_columns():
    g = LatticeGeometry(5, 4, 1.0)
    vals = np.arange(20, dtype=float)
    field = ScalarField(geom=g, values=vals)
    cut = cross_section(field, "x", offset=g.site_coordinates((0, 2))[1])
    assert np.array_equal(cut.values, vals[10:15])
    assert np.allclose(cut.coords, [g.site_coordinates((i, 2))[0] for i in range(5)])
    cut_y = cross_section(field, "y", offset=g.site_coordinates((3, 0))[0])
    assert np.array_equal(cut_y.values, vals[3::5])


def test_cross_section_snaps_to_nearest_line_within_half_spacing():
    g = LatticeGeometry(4, 4, 1.0)
    field = ScalarField(geom=g, values=np.ones(16) / 16)
    cut = cross_section(field, "x", offset=0.4)   # nearest line is y=+0.5
    assert cut.offset == pytest.approx(0.5)
    with pytest.raises(ValueError):
        cross_section(field, "x", offset=40.0)
    with pytest.raises(ValueError):
        cross_section(field, "z", offset=0.0)


def test_diagonal_cut_square_grid():
    g = LatticeGeometry(5, 5, 1.0)
    vals = np.zeros(25)
    for i in range(5):
        vals[g.site_index((i, i))] = float(i)
    cut = cross_section(ScalarField(geom=g, values=vals), "diag")
    assert np.array_equal(cut.values, [0, 1, 2, 3, 4])
    # coordinate is the signed distance along the diagonal
    assert np.allclose(cut.coords, (np.arange(5) - 2.0) * np.sqrt(2.0))


def test_fourfold_symmetric_field_has_identical_axis_cuts():
    n = 21
    g = LatticeGeometry(n, n, 0.5)
    x = g.x.reshape(n, n)
    y = g.y.reshape(n, n)
    lobe = np.exp(-((x - 2) ** 2 + (y - 2) ** 2))
    sym = lobe + np.rot90(lobe) + np.rot90(lobe, 2) + np.rot90(lobe, 3)
    field = ScalarField(geom=g, values=(sym / sym.sum()).ravel())
    cx = cross_section(field, "x")
    cy = cross_section(field, "y")
    assert np.max(np.abs(cx.values - cy.values)) < 1e-14
    rot = rotated_90(field)
    assert np.max(np.abs(rot.values - field.values)) < 1e-14


def test_rotated_90_moves_sites_correctly():
    g = LatticeGeometry(3, 3, 1.0)
    vals = np.zeros(9)
    vals[g.site_index((2, 1))] = 1.0  # site at (+1, 0)
    rot = rotated_90(ScalarField(geom=g, values=vals))
    # quarter turn sends (+1, 0) to (0, +1)
    assert rot.values[g.site_index((1, 2))] == 1.0
    assert rot.values.sum() == 1.0
    with pytest.raises(ValueError):
        rotated_90(ScalarField(geom=LatticeGeometry(3, 4, 1.0), values=np.zeros(12)))


# --- boundary mass -----------------------------------------------------------

@given(st.integers(4, 40), st.integers(1, 10))
def test_boundary_mass_counting_formula(n, w):
    if 2 * w >= n:
        return
    g = LatticeGeometry(n, n, 1.0)
    uniform = ScalarField(geom=g, values=np.full(n * n, 1.0 / (n * n)))
    expect = 1.0 - (n - 2 * w) ** 2 / n ** 2
    assert boundary_mass(uniform, w) == pytest.approx(expect, abs=1e-12)


def test_boundary_mass_of_centered_state_is_tiny():
    g = LatticeGeometry(36, 36, 2**-0.5)
    sol = solve_lowest(build(g, ModelParams(kind="hubbard", omega=0.3)), 1, tol=1e-10)
    assert boundary_mass(ground_density(g, sol), 5) < 1e-8


def test_boundary_mass_margin_validation():
    g = LatticeGeometry(8, 8, 1.0)
    field = ScalarField(geom=g, values=np.full(64, 1 / 64))
    with pytest.raises(ValueError):
        boundary_mass(field, 0)
    with pytest.raises(ValueError):
        boundary_mass(field, 4)   # margins meet in the middle
