"""
Tests for the discrete divergence and the divergence-free projection
"""
import numpy as np
import pytest

from src.grid import edge_quadrature, fill_ghosts, make_grid
from src.models import InterfaceSet
from src.problems import get_problem, init_cell_averages
from src.projection import (ddf_project, discrete_divergence, projection_corrections,
                            projection_matrix, projection_matrix_check)
from src.reconstruct import reconstruct
from src.state import IdealEos

pytestmark = [pytest.mark.unit, pytest.mark.projection]

RATIOS = (0.1, 0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 3.0, 4.0, 10.0)


class TestDiscreteDivergence:
    """Test the per-cell quadrature divergence"""

    def test_constant_traces(self, unit_grid5, quad5, random_states):
        """Test that traces equal to the cell average have zero divergence"""
        traces = InterfaceSet.from_cells(random_states(unit_grid5.shape), quad5.Q)
        assert np.all(discrete_divergence(traces, unit_grid5, quad5) == 0.0)

    def test_known_value(self, quad2):
        """Test div = (B1e - B1w)/dx + (B2n - B2s)/dy on one cell"""
        grid = make_grid(1, 1, (0.0, 0.5, 0.0, 0.25), 2)
        traces = InterfaceSet.from_cells(np.zeros((8, 1, 1)), 1)
        traces.east[4] = 1.0
        traces.south[5] = 0.25
        assert discrete_divergence(traces, grid, quad2)[0, 0] == pytest.approx(1.0)


class TestDdfProject:
    """Test the closed-form projection of inner traces"""

    def test_projected_traces_divergence_free(self, unit_grid5, quad5, random_traces):
        """Test that every cell has zero discrete divergence after projection"""
        _, traces = random_traces(8, 8, 4, spread=0.3)
        before = discrete_divergence(traces, unit_grid5, quad5)
        assert np.abs(before).max() > 1e-2
        after = discrete_divergence(ddf_project(traces, unit_grid5, quad5), unit_grid5, quad5)
        np.testing.assert_allclose(after, 0.0, atol=1e-12)

    @pytest.mark.parametrize('ratio', [0.25, 4.0])
    def test_anisotropic_cells(self, quad5, random_traces, ratio):
        """Test the projection on cells with dx != dy"""
        grid = make_grid(6, 6, (0.0, 6.0 * ratio, 0.0, 6.0), 5)
        _, traces = random_traces(6, 6, 4, spread=0.3)
        after = discrete_divergence(ddf_project(traces, grid, quad5), grid, quad5)
        np.testing.assert_allclose(after, 0.0, atol=1e-12)

    def test_idempotent(self, unit_grid5, quad5, random_traces):
        """Test that projecting twice changes nothing beyond round-off"""
        _, traces = random_traces(8, 8, 4)
        once = ddf_project(traces, unit_grid5, quad5)
        twice = ddf_project(once, unit_grid5, quad5)
        for name in once.INNER:
            np.testing.assert_allclose(getattr(twice, name), getattr(once, name), atol=1e-13)

    def test_only_normal_field_changes(self, unit_grid5, quad5, random_traces):
        """Test that the projection touches B1 on x-edges and B2 on y-edges only"""
        _, traces = random_traces(8, 8, 4)
        out = ddf_project(traces, unit_grid5, quad5)
        normal = {'east': 4, 'west': 4, 'north': 5, 'south': 5}
        for name, component in normal.items():
            keep = [c for c in range(8) if c != component]
            np.testing.assert_array_equal(getattr(out, name)[keep], getattr(traces, name)[keep])

    def test_does_not_modify_input(self, unit_grid5, quad5, random_traces):
        """Test that the input trace set is left alone"""
        _, traces = random_traces(8, 8, 4)
        east = traces.east.copy()
        ddf_project(traces, unit_grid5, quad5)
        np.testing.assert_array_equal(traces.east, east)

    def test_divergence_free_input_unchanged(self, unit_grid5, quad5, random_states):
        """Test that already divergence-free traces pass through exactly"""
        traces = InterfaceSet.from_cells(random_states(unit_grid5.shape), quad5.Q)
        out = ddf_project(traces, unit_grid5, quad5)
        for name in traces.INNER:
            np.testing.assert_array_equal(getattr(out, name), getattr(traces, name))

    def test_corrections_split_by_aspect_ratio(self, quad2):
        """Test A1 = dx d / (2 (1 + r^2)) and A2 = dy d / (2 (1 + r^-2))"""
        grid = make_grid(1, 1, (0.0, 2.0, 0.0, 1.0), 2)
        traces = InterfaceSet.from_cells(np.zeros((8, 1, 1)), 1)
        traces.east[4] = 2.0
        a1, a2 = projection_corrections(traces, grid, quad2)
        assert a1[0, 0] == pytest.approx(2.0 * 1.0 / (2.0 * 5.0))
        assert a2[0, 0] == pytest.approx(1.0 * 1.0 / (2.0 * 1.25))


class TestProjectionMatrix:
    """Test the per-cell projection matrix"""

    @pytest.mark.parametrize('ratio', RATIOS)
    def test_idempotent_self_check(self, ratio):
        """Test P P = P across aspect ratios"""
        assert projection_matrix_check(ratio, 1.0)

    @pytest.mark.parametrize('ratio', RATIOS)
    def test_symmetric_and_range_divergence_free(self, ratio):
        """Test that P is symmetric and its range has zero divergence"""
        dx, dy = ratio, 1.0
        P = projection_matrix(dx, dy)
        np.testing.assert_allclose(P, P.T, atol=1e-15)
        div = np.array([-1.0 / dx, 1.0 / dx, -1.0 / dy, 1.0 / dy])
        np.testing.assert_allclose(div @ P, 0.0, atol=1e-13)


@pytest.mark.slow
class TestCorrectionDecay:
    """Test that the projection corrections of WENO traces vanish at the reconstruction order"""

    @pytest.mark.parametrize('chardecomp', [False, True])
    def test_vortex_corrections_fifth_order(self, chardecomp):
        """Test max |A| orders of at least 4.5 on refined vortex grids"""
        spec = get_problem('vortex')
        eos, quad = IdealEos(spec.gamma), edge_quadrature(5)
        sizes = []
        for n in (40, 80, 160):
            grid = make_grid(n, n, spec.bounds, 5)
            U = fill_ghosts(init_cell_averages(spec, grid, eos), grid, spec.bc, 0.0, eos)
            a1, a2 = projection_corrections(reconstruct(U, grid, quad, eos, chardecomp), grid, quad)
            sizes.append(max(np.abs(a1).max(), np.abs(a2).max()))
        orders = np.log2(np.array(sizes[:-1]) / np.array(sizes[1:]))
        assert np.all(orders >= 4.5), orders
