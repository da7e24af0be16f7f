"""
Tests for the extreme constructions: n+1 cells for one station, and one
cell per ring inside nested wires.
"""
import pytest

from sinrmap.geometry import (
    construct_log_wires,
    construct_omega_n,
    count_cells_2d,
    log_wire_feasibility_bound,
    omega_cell_count,
    omega_limits,
    wire_network_sinr,
    wire_ray_cells,
)
from sinrmap.model import validate_network


@pytest.mark.parametrize("n, radius", [(2, 15), (3, 15), (6, 18)])
def test_omega_radius(n, radius):
    """R is the first integer from 2n+1 with U > L."""
    _, report = construct_omega_n(n)
    assert report.radius == radius
    lower, upper = omega_limits(n, radius - 1)
    assert upper <= lower


@pytest.mark.parametrize("n", [2, 3, 4])
def test_omega_construction_verifies(n):
    net, report = construct_omega_n(n)
    assert report.feasible
    assert report.r1_passed and report.r2_passed
    assert report.lower <= report.p0 < report.upper
    assert report.min_center_sinr >= 1.0
    assert report.max_boundary_sinr < 1.0
    assert net.n == 1 + 4 * n
    assert net.stations[0].id == "s0"
    validate_network(net)


def test_omega_construction_r2_sample_count():
    _, report = construct_omega_n(2, r2_samples=10)
    assert report.r2_samples == 12


def test_omega_square_centre_is_its_own_cell(omega2):
    net, _ = omega2
    # the box sits strictly inside the square outline around (15, 0)
    report = count_cells_2d(net, 0, grid_step=0.02, bounds=(14.5, -0.5, 15.5, 0.5))
    assert report.count == 1
    assert report.converged


def test_omega_cell_count(omega2):
    net, report = omega2
    cells = omega_cell_count(net, report, grid_step=0.1, max_refinements=1)
    assert cells.count == 3
    assert cells.history == [3, 3]


@pytest.mark.parametrize(
    "n", [2, *(pytest.param(n, marks=pytest.mark.slow) for n in range(3, 7))]
)
def test_omega_has_n_plus_one_cells(n):
    net, report = construct_omega_n(n)
    cells = omega_cell_count(net, report)
    assert cells.count == n + 1
    assert cells.converged
    assert set(cells.history) == {n + 1}


def test_omega_needs_two_squares():
    with pytest.raises(ValueError, match="n >= 2"):
        construct_omega_n(1)


def test_log_wire_feasibility_bound():
    assert log_wire_feasibility_bound(1, 1.0) == 8.0
    assert log_wire_feasibility_bound(3, 0.0) == 16.0**2 * 7


def test_log_wires_feasible():
    bound = log_wire_feasibility_bound(2, 1.0)
    wnet, report = construct_log_wires(2, bound)
    assert report.feasible and report.passed
    assert report.test_points == [0.0, 2.0, 8.0]
    assert [w.radius for w in wnet.wires] == [1.0, 4.0]
    assert all(v >= 1.0 for v in report.sinr_values)
    # x = 2 sits between the wires: 1/(4 - 1) inside, 1/(16 - 4) outside
    assert report.inner_interference[1] == pytest.approx(1 / 3)
    assert report.outer_interference[1] == pytest.approx(1 / 12)


def test_log_wires_one_cell_per_ring():
    wnet, _ = construct_log_wires(2, log_wire_feasibility_bound(2, 1.0))
    assert wire_ray_cells(wnet) == 3


def test_log_wires_infeasible_power():
    _, report = construct_log_wires(3, 10.0)
    assert not report.feasible
    assert not report.passed


def test_log_wires_validation():
    with pytest.raises(ValueError, match="rho"):
        construct_log_wires(0, 1.0)
    with pytest.raises(ValueError, match="p1"):
        construct_log_wires(2, 0.0)


def test_wire_network_sinr_is_zero_on_a_wire():
    wnet, _ = construct_log_wires(1, 8.0)
    assert wire_network_sinr(wnet, 0, [[1.0, 0.0]])[0] == 0.0
