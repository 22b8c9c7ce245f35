import pytest

from dolbeault.quadrature import (
    QuadratureGrid, coordinate_change_check_n1, is_injective_on_disk, kernel_constant,
    lie_derivative_check, sphere_residue_numeric,
)

GRID = QuadratureGrid.cube(64)


def test_sphere_examples():
    assert abs(sphere_residue_numeric(2, (0, 0), GRID) - 1) < 1e-6
    assert abs(sphere_residue_numeric(2, (1, 0), GRID)) < 1e-6
    assert abs(sphere_residue_numeric(1, (0,), QuadratureGrid.cube(64)) - 1) < 1e-10


def test_residue_pairing_is_kronecker():
    """dz z^I d^J w integrates to (-1)^|J| J! delta_IJ."""
    from math import factorial
    for I in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)]:
        for J in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)]:
            expected = 0
            if I == J:
                expected = (-1) ** sum(J) * factorial(J[0]) * factorial(J[1])
            assert abs(sphere_residue_numeric(2, I, GRID, J) - expected) < 1e-9


def test_lie_derivative_examples():
    assert abs(lie_derivative_check(2, 1, GRID)) < 1e-6
    assert abs(lie_derivative_check(2, 2, GRID)) < 1e-6
    assert abs(lie_derivative_check(2, 1, GRID, scale=2)) < 2e-6
    with pytest.raises(ValueError):
        lie_derivative_check(2, 3, GRID)


def test_radius_independence():
    assert abs(sphere_residue_numeric(2, (0, 0), GRID, radius=0.3) - 1) < 1e-9


def test_coordinate_change_examples():
    assert coordinate_change_check_n1([1], 0.5, GRID) == 0
    assert abs(coordinate_change_check_n1([1, 1], 0.1, GRID)) < 1e-8
    assert abs(coordinate_change_check_n1([2], 0.5, GRID)) < 1e-8


def test_coordinate_change_rejects_non_injective():
    # z + z^2 folds the disk of radius 1 (w'(-1/2) = 0)
    assert not is_injective_on_disk([1, 1], 1.0)
    with pytest.raises(ValueError):
        coordinate_change_check_n1([1, 1], 1.0, GRID)
    with pytest.raises(ValueError):
        coordinate_change_check_n1([0, 1], 0.1, GRID)


def test_grid_validation():
    with pytest.raises(ValueError):
        QuadratureGrid(4, 64)
    assert QuadratureGrid.cube(16).doubled() == QuadratureGrid(32, 32)


def test_kernel_constant_n2():
    from math import pi
    assert abs(kernel_constant(2) + 1 / (4 * pi ** 2)) < 1e-15


@pytest.mark.parametrize("N", [8, 16, 32])
@pytest.mark.parametrize("I", [(0, 0), (1, 0), (1, 1)])
def test_convergence_does_not_degrade(N, I):
    target = 1 if I == (0, 0) else 0
    g = QuadratureGrid.cube(N)
    e1 = abs(sphere_residue_numeric(2, I, g, radius=1.0) - target)
    e2 = abs(sphere_residue_numeric(2, I, g.doubled(), radius=1.0) - target)
    assert e2 <= e1 + 1e-12


@pytest.mark.parametrize("N", [8, 16, 32])
def test_contour_convergence(N):
    g = QuadratureGrid.cube(N)
    e1 = abs(coordinate_change_check_n1([1, 0.3, 0.1], 0.5, g))
    e2 = abs(coordinate_change_check_n1([1, 0.3, 0.1], 0.5, g.doubled()))
    assert e2 <= e1 + 1e-12
