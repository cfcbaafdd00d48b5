import numpy as np
import pytest

from rotlat import LatticeGeometry, ModelParams, build, solve_lowest

# Outcomes of the acceptance checks, reported as one line each at the end of
# the run so a quick scan of the terminal shows which physics claims held.
_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance[name] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.write_sep("=", "acceptance checks")
    for name, outcome in _acceptance.items():
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{tag}  {name}")


@pytest.fixture(scope="session")
def supercritical_lattice():
    """Tightly converged 150x150 lattice run just above the trap frequency.

    This is the most expensive solve in the suite and several checks look at
    it (multiplet structure, currents, profile comparisons), so it is shared.
    """
    geom = LatticeGeometry(150, 150, 2**-0.5)
    params = ModelParams(kind="hubbard", omega=0.1, bigomega=0.11)
    sol = solve_lowest(build(geom, params), 12, tol=1e-12)
    return geom, params, sol


@pytest.fixture(scope="session")
def subcritical_lattice():
    """100x100 lattice just below the trap frequency (shared across checks)."""
    geom = LatticeGeometry(100, 100, 2**-0.5)
    params = ModelParams(kind="hubbard", omega=0.1, bigomega=0.09)
    sol = solve_lowest(build(geom, params), 4, tol=1e-9)
    return geom, params, sol


@pytest.fixture(scope="session")
def subcritical_mesh_runs():
    """Discretized continuum at omega=0.1, bigomega=0.09 on a fixed 40x40
    physical window for three mesh spacings, finest last."""
    runs = []
    for h in (0.5, 0.35, 0.25):
        nx = int(round(40.0 / h)) + 1
        geom = LatticeGeometry(nx, nx, h)
        params = ModelParams(kind="continuum", omega=0.1, bigomega=0.09)
        sol = solve_lowest(build(geom, params), 8, tol=1e-10)
        runs.append((geom, params, sol))
    return runs
