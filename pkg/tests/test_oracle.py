import numpy as np
import pytest

from auxfield.core import QuantumState
from auxfield.errors import ConvergenceError
from auxfield.oracle import (
    RadialGrid,
    count_nodes,
    expectation,
    observed_order,
    radial_spectrum,
    richardson,
    solve_radial,
)


def coulomb_potential(r):
    return -1.0 / r


def oscillator(r):
    return 0.5 * r * r


@pytest.mark.parametrize("n, l", [(0, 0), (1, 0), (0, 1), (2, 1)])
def test_hydrogen_levels(n, l):
    sol = solve_radial(coulomb_potential, 1.0, QuantumState(n, l))
    expected = -0.5 / (n + l + 1) ** 2
    assert sol.energy == pytest.approx(expected, rel=1e-7)
    assert sol.error_estimate <= 1e-7
    assert sol.nodes == n


def test_oscillator_tower():
    for n in range(4):
        for l in range(3):
            sol = solve_radial(oscillator, 1.0, QuantumState(n, l))
            assert sol.energy == pytest.approx(2 * n + l + 1.5, rel=1e-7)


def test_hydrogen_mean_radius_and_normalization():
    sol = solve_radial(coulomb_potential, 1.0, QuantumState(0, 0))
    assert expectation(sol, lambda r: r) == pytest.approx(1.5, rel=1e-7)
    assert expectation(sol, lambda r: 1.0) == pytest.approx(1.0, abs=1e-9)
    assert sol.norm_residual <= 1e-10


def test_virial_oscillator():
    sol = solve_radial(oscillator, 1.0, QuantumState(1, 1))
    mean_v = expectation(sol, oscillator)
    assert mean_v == pytest.approx(sol.energy / 2, rel=1e-6)


def test_orthogonality():
    grid = RadialGrid(40.0, 4000)
    w, v = radial_spectrum(coulomb_potential, 1.0, 0, grid, count=4)
    gram = grid.spacing * v.T @ v
    assert np.allclose(gram, np.eye(4), atol=1e-10)
    assert [count_nodes(v[:, j]) for j in range(4)] == [0, 1, 2, 3]


def test_second_order_convergence():
    grid = RadialGrid(12.0, 500)
    energies = [radial_spectrum(oscillator, 1.0, 0, grid.refined(k))[0][0] for k in (1, 2, 4)]
    assert observed_order(energies) == pytest.approx(2.0, abs=0.05)
    assert abs(richardson(energies)[-1] - 1.5) < abs(energies[-1] - 1.5) / 100


def test_richardson_removes_h2():
    values = [1.0 + 0.3 * h * h for h in (0.4, 0.2, 0.1)]
    assert np.allclose(richardson(values), 1.0, atol=1e-14)


def test_grid_validation():
    with pytest.raises(ValueError):
        RadialGrid(-1.0)
    with pytest.raises(ValueError):
        RadialGrid(10.0, 100)
    g = RadialGrid(10.0, 1000)
    assert g.r[0] == pytest.approx(0.01) and g.r.size == 999


def test_unreachable_tolerance_raises():
    with pytest.raises(ConvergenceError):
        solve_radial(coulomb_potential, 1.0, QuantumState(), tolerance=1e-16)


def test_ladder_needs_two_grids():
    with pytest.raises(ValueError):
        solve_radial(oscillator, 1.0, QuantumState(), ladder=(1,))


def test_mass_scaling():
    # eps = N sqrt(2 nu / m) = 1.5 at nu = 1, m = 2
    sol = solve_radial(lambda r: r * r, 2.0, QuantumState())
    assert sol.energy == pytest.approx(1.5, rel=1e-7)
