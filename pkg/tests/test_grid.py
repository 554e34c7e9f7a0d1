import numpy as np
import pytest

from qdefect import GridError, PolarGrid, RadialGrid


@pytest.mark.parametrize("ctor", [RadialGrid.uniform, RadialGrid.graded])
@pytest.mark.parametrize("n", [16, 100, 513])
def test_weights_integrate_r_exactly(ctor, n):
    g = ctor(2.5, n)
    target = 2.5**2 / 2.0
    assert abs(np.sum(g.weights) - target) < 1e-14 * target
    assert abs(np.sum(g.node_masses) - target) < 1e-14 * target


def test_weights_integrate_r_cubed_second_order():
    errs = []
    for n in (64, 128, 256):
        g = RadialGrid.uniform(1.0, n)
        errs.append(abs(np.sum(g.weights * g.nodes**2) - 0.25))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.2)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.2)


def test_minimum_resolution_enforced():
    RadialGrid.uniform(1.0, 16)
    with pytest.raises(GridError):
        RadialGrid.uniform(1.0, 15)
    with pytest.raises(GridError):
        RadialGrid(np.linspace(0.1, 1.0, 65))  # must start at 0
    with pytest.raises(GridError):
        RadialGrid(np.zeros(65))


def test_graded_first_node_and_smoothness():
    g = RadialGrid.graded(2.0, 256)
    assert g.nodes[0] == 0.0
    assert g.nodes[1] == pytest.approx(2.0e-3, rel=1e-12)
    assert g.nodes[-1] == 2.0
    ratios = g.h[1:] / g.h[:-1]
    assert np.all(ratios > 0.9) and np.all(ratios < 1.6)


def test_for_defect_selects_grading():
    assert RadialGrid.for_defect(1.0, 256, 1).spacing == "uniform"
    assert RadialGrid.for_defect(1.0, 256, -1).spacing == "uniform"
    assert RadialGrid.for_defect(1.0, 256, 2).spacing == "graded"
    assert RadialGrid.for_defect(1.0, 256, -3).spacing == "graded"


def test_gauss_points_integrate_r():
    g = RadialGrid.graded(1.0, 64)
    rg, wg = g.gauss_points()
    assert np.sum(wg) == pytest.approx(0.5, rel=1e-14)
    # per-segment sums reproduce the exact segment integral of r dr
    seg = 0.5 * (g.nodes[1:] ** 2 - g.nodes[:-1] ** 2)
    assert np.max(np.abs(wg.sum(axis=1) - seg)) < 1e-16 + 1e-14 * np.max(seg)


def test_interpolation_is_linear():
    g = RadialGrid.uniform(1.0, 32)
    rg, _ = g.gauss_points()
    vals = 3.0 * g.nodes + 1.0
    interp = g.interpolate(vals, rg)
    assert np.max(np.abs(interp - (3.0 * rg + 1.0))) < 1e-14


def test_polar_grid_validation():
    g = RadialGrid.uniform(1.0, 32)
    pg = PolarGrid(g, 64)
    assert pg.dphi == pytest.approx(2.0 * np.pi / 64.0, rel=1e-16)
    assert pg.phis.size == 64 and pg.phis[0] == 0.0
    with pytest.raises(GridError):
        PolarGrid(g, 63)
    with pytest.raises(GridError):
        PolarGrid(g, 62)  # even but below the floor
