"""
Tests for van Albada and WENO-Z reconstruction and the characteristic basis
"""
import math

import numpy as np
import pytest

from src.characteristics import characteristic_basis
from src.errors import ContractError
from src.grid import edge_quadrature, fill_ghosts, make_grid
from src.models import Grid2D
from src.reconstruct import (linear_interface_values, linear_weights, reconstruct,
                             van_albada_slopes, weno5z_nodes, weno5z_point)
from src.state import conserved_from_primitive, physical_flux
from src.utils.pagination import paginate, row_pages

pytestmark = [pytest.mark.unit, pytest.mark.reconstruct]

GL_NODE = 1.0 / (2.0 * math.sqrt(5.0))
# zero internal energy for B = (0.5, 0.25, 0) at rest
PRESSURELESS_ENERGY = 0.15625


def _sine_averages(h, shift=0.0):
    """Averages of sin over cells k = -2..2 of width h (cell coordinates scaled by h)"""
    k = np.arange(-2, 3)
    lo, hi = (k - 0.5) * h + shift, (k + 0.5) * h + shift
    return (np.cos(lo) - np.cos(hi)) / h


class TestLinearWeights:
    """Test the WENO-Z linear weights"""

    def test_classic_edge_weights(self):
        """Test d = (1/10, 6/10, 3/10) at the right cell edge"""
        np.testing.assert_allclose(linear_weights(0.5), [0.1, 0.6, 0.3], atol=1e-14)

    @pytest.mark.parametrize('xi', [-0.5, -GL_NODE, GL_NODE, 0.5])
    def test_weights_positive_and_normalized(self, xi):
        """Test that the weights at every Gauss-Lobatto node are positive and sum to one"""
        d = linear_weights(xi)
        assert np.all(d > 0.0)
        assert d.sum() == pytest.approx(1.0, abs=1e-14)

    def test_mirror_symmetry(self):
        """Test d(-xi) = reversed d(xi)"""
        np.testing.assert_allclose(linear_weights(-GL_NODE), linear_weights(GL_NODE)[::-1],
                                   atol=1e-14)


class TestWenoKernel:
    """Test the point-value WENO-Z kernel"""

    def test_constant_data(self):
        """Test that constants are reproduced"""
        v = np.full((5, 3), 2.5)
        out = weno5z_nodes(v, (-0.5, -GL_NODE, GL_NODE, 0.5))
        np.testing.assert_allclose(out, 2.5, rtol=1e-15)

    def test_linear_weights_exact_for_quartics(self):
        """Test that the linear combination reproduces quartic point values"""
        k = np.arange(-2, 3, dtype=float)
        averages = ((k + 0.5) ** 5 - (k - 0.5) ** 5) / 5.0
        for xi in (-0.5, -GL_NODE, GL_NODE, 0.5):
            value = weno5z_nodes(averages, (xi,), linear=True)[0]
            assert value == pytest.approx(xi ** 4, abs=1e-13)

    def test_smooth_data_high_order(self):
        """Test that WENO-Z point values are fifth-order accurate on smooth data"""
        errors = []
        for h in (0.1, 0.05):
            v = _sine_averages(h, shift=0.3)
            value = weno5z_nodes(v, (GL_NODE,))[0]
            errors.append(abs(value - math.sin(0.3 + GL_NODE * h)))
        assert errors[0] < 1e-6
        assert errors[1] < errors[0] / 16.0

    def test_discontinuity_picks_smooth_stencil(self):
        """Test that a jump to the right leaves the right-edge value near the left state"""
        value = weno5z_point(0.0, 0.0, 0.0, 1.0, 1.0, bias='minus')
        assert 0.0 <= value < 1e-6

    def test_bias_selects_edge(self):
        """Test that 'plus' is the left edge value of the center cell"""
        cells = _sine_averages(0.2)
        assert weno5z_point(*cells, bias='plus') == pytest.approx(weno5z_nodes(cells, (-0.5,))[0])
        with pytest.raises(ContractError):
            weno5z_point(*cells, bias='up')


class TestVanAlbada:
    """Test second-order reconstruction"""

    def test_linear_field_slopes_exact(self, eos):
        """Test that van Albada slopes recover the gradient of a linear field"""
        grid = make_grid(6, 5, (0.0, 1.0, 0.0, 1.0), 2)
        X, Y = grid.cell_centers(with_ghosts=True)
        U = np.ones((8,) + grid.padded_shape)
        U[0] = 1.0 + 0.5 * X - 0.25 * Y
        slopes = van_albada_slopes(U, grid)
        np.testing.assert_allclose(slopes.sx[0], 0.5, rtol=1e-12)
        np.testing.assert_allclose(slopes.sy[0], -0.25, rtol=1e-12)

    def test_extremum_flattens(self):
        """Test that opposite one-sided slopes of equal size give a zero slope"""
        grid = make_grid(1, 1, (0.0, 0.1, 0.0, 0.1), 2)
        U = np.zeros((8,) + grid.padded_shape)
        g = grid.ghost
        U[0, g, g - 1] = -0.1
        U[0, g, g + 1] = -0.1
        slopes = van_albada_slopes(U, grid)
        assert slopes.sx[0, 0, 0] == pytest.approx(0.0, abs=1e-15)

    def test_linear_traces_are_edge_values(self):
        """Test that linear traces of a linear field equal its edge midpoint values"""
        grid = make_grid(4, 3, (0.0, 1.0, 0.0, 1.0), 2)
        X, Y = grid.cell_centers(with_ghosts=True)
        U = np.ones((8,) + grid.padded_shape)
        U[0] = 2.0 + X + 2.0 * Y
        traces = linear_interface_values(U, van_albada_slopes(U, grid), grid)
        c = U[grid.interior][0]
        np.testing.assert_allclose(traces.east[0, ..., 0], c + 0.5 * grid.dx, rtol=1e-12)
        np.testing.assert_allclose(traces.west[0, ..., 0], c - 0.5 * grid.dx, rtol=1e-12)
        np.testing.assert_allclose(traces.north[0, ..., 0], c + grid.dy, rtol=1e-12)
        np.testing.assert_allclose(traces.south[0, ..., 0], c - grid.dy, rtol=1e-12)

    def test_constant_field_traces(self, unit_grid2, quad2, random_states, eos):
        """Test that a constant field gives traces equal to the cell average"""
        state = random_states(1)[:, 0]
        U = np.broadcast_to(state[:, None, None], (8,) + unit_grid2.padded_shape).copy()
        traces = reconstruct(U, unit_grid2, quad2, eos)
        for name in traces.INNER:
            np.testing.assert_allclose(getattr(traces, name)[..., 0],
                                       U[unit_grid2.interior], rtol=1e-15)


class TestWenoTraces:
    """Test two-step WENO-Z reconstruction on fields"""

    @pytest.fixture
    def smooth_field(self, unit_grid5, periodic, eos):
        X, Y = unit_grid5.cell_centers(with_ghosts=True)
        W = np.empty((8,) + unit_grid5.padded_shape)
        W[0] = 1.0 + 0.2 * np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y)
        W[1], W[2], W[3] = 0.3, -0.2, 0.1
        W[4], W[5], W[6] = 0.5, 0.4, 0.1
        W[7] = 1.0
        U = conserved_from_primitive(W, eos)
        return fill_ghosts(U, unit_grid5, periodic, 0.0, eos)

    @pytest.mark.parametrize('chardecomp', [False, True])
    def test_constant_field(self, unit_grid5, quad5, eos, chardecomp, primitive):
        """Test that a constant field is reproduced at every node"""
        W = primitive(1.2, v=(0.1, 0.2, 0.0), B=(0.6, -0.3, 0.2), p=0.8,
                      shape=unit_grid5.padded_shape)
        U = conserved_from_primitive(W, eos)
        traces = reconstruct(U, unit_grid5, quad5, eos, chardecomp=chardecomp)
        assert traces.fallbacks == 0
        for name in traces.INNER:
            arr = getattr(traces, name)
            assert arr.shape == (8, 8, 8, 4)
            np.testing.assert_allclose(arr, U[unit_grid5.interior][..., None], rtol=1e-12)

    def test_threaded_sweep_bit_identical(self, unit_grid5, quad5, eos, smooth_field):
        """Test that worker pages write disjoint rows with identical results"""
        serial = reconstruct(smooth_field, unit_grid5, quad5, eos, chardecomp=True)
        threaded = reconstruct(smooth_field, unit_grid5, quad5, eos, chardecomp=True, workers=3)
        for name in serial.INNER:
            np.testing.assert_array_equal(getattr(serial, name), getattr(threaded, name))

    def test_shared_edges_close_on_smooth_data(self, unit_grid5, quad5, eos, smooth_field):
        """Test that both sides of an interior edge agree to truncation error"""
        traces = reconstruct(smooth_field, unit_grid5, quad5, eos)
        jump = np.abs(traces.east[:, :, :-1] - traces.west[:, :, 1:])
        assert jump.max() < 5e-3

    def test_singular_basis_falls_back_to_componentwise(self, unit_grid5, quad5, periodic, eos):
        """Test that a pressureless magnetized field is reconstructed component-wise"""
        X, Y = unit_grid5.cell_centers(with_ghosts=True)
        U = np.zeros((8,) + unit_grid5.padded_shape)
        U[0] = 1.0 + 0.2 * np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y)
        U[4], U[5] = 0.5, 0.25
        U[7] = PRESSURELESS_ENERGY
        fill_ghosts(U, unit_grid5, periodic, 0.0, eos)
        characteristic = reconstruct(U, unit_grid5, quad5, eos, chardecomp=True)
        componentwise = reconstruct(U, unit_grid5, quad5, eos)
        assert characteristic.fallbacks == 4 * 8 * 8
        for name in characteristic.INNER:
            np.testing.assert_allclose(getattr(characteristic, name), getattr(componentwise, name),
                                       rtol=1e-14, atol=1e-14)

    def test_needs_three_ghost_layers(self, quad5, eos):
        """Test that k=5 refuses a grid with two ghost layers"""
        grid = Grid2D(4, 4, 0.0, 1.0, 0.0, 1.0, ghost=2)
        with pytest.raises(ContractError):
            reconstruct(np.ones((8,) + grid.padded_shape), grid, quad5, eos)


class TestCharacteristicBasis:
    """Test the eight-wave eigenvector basis"""

    def _jacobian(self, U, direction, eos):
        J = np.empty((8, 8))
        for k in range(8):
            h = 1e-6 * max(1.0, abs(U[k]))
            up, down = U.copy(), U.copy()
            up[k] += h
            down[k] -= h
            J[:, k] = (physical_flux(up, direction, eos) - physical_flux(down, direction, eos)) / (2 * h)
        return J

    def test_left_inverts_right(self, random_states, eos):
        """Test L R = I"""
        U = random_states(20)
        for direction in (1, 2):
            R, L, fallbacks = characteristic_basis(U, direction, eos)
            assert fallbacks == 0
            np.testing.assert_allclose(L @ R, np.broadcast_to(np.eye(8), R.shape), atol=1e-10)

    @pytest.mark.parametrize('direction', [1, 2])
    def test_eigenvectors_of_flux_jacobian(self, primitive, eos, direction):
        """Test A r = lambda r for every wave except the divergence wave"""
        W = primitive(1.2, v=(0.3, -0.2, 0.1), B=(0.8, 0.5, -0.3), p=0.9)
        U = conserved_from_primitive(W, eos)
        R, _, _ = characteristic_basis(U, direction, eos)
        A = self._jacobian(U, direction, eos)

        n = direction - 1
        rho, vn = W[0], W[1 + n]
        a2 = eos.sound_speed_squared(rho, W[7])
        b2 = np.sum(W[4:7] ** 2) / rho
        bn2 = W[4 + n] ** 2 / rho
        root = math.sqrt((a2 + b2) ** 2 - 4 * a2 * bn2)
        cf, cs = math.sqrt(0.5 * (a2 + b2 + root)), math.sqrt(0.5 * (a2 + b2 - root))
        ca = math.sqrt(bn2)
        speeds = {0: vn - cf, 1: vn - ca, 2: vn - cs, 3: vn, 5: vn + cs, 6: vn + ca, 7: vn + cf}
        for col, lam in speeds.items():
            r = R[:, col]
            np.testing.assert_allclose(A @ r, lam * r, atol=1e-6 * np.abs(r).max())

    def test_unmagnetized_state_not_singular(self, primitive, eos):
        """Test that B = 0 still yields an invertible basis"""
        U = conserved_from_primitive(primitive(1.0, v=(0.5, 0.0, 0.0), p=1.0), eos)
        R, L, fallbacks = characteristic_basis(U, 1, eos)
        assert fallbacks == 0
        np.testing.assert_allclose(L @ R, np.eye(8), atol=1e-12)

    def test_pressureless_state_is_singular(self, eos):
        """Test that p = 0 with a magnetic field collapses the fast waves and falls back to I"""
        U = np.array([1.3, 0.0, 0.0, 0.0, 0.5, 0.25, 0.0, PRESSURELESS_ENERGY])
        for direction in (1, 2):
            R, L, fallbacks = characteristic_basis(U, direction, eos)
            assert fallbacks == 1
            np.testing.assert_array_equal(R, np.eye(8))
            np.testing.assert_array_equal(L, np.eye(8))

    def test_quadrature_rule_matches_basis_nodes(self):
        """Test that the reconstruction nodes are the Gauss-Lobatto nodes"""
        np.testing.assert_allclose(edge_quadrature(5).nodes, [-0.5, -GL_NODE, GL_NODE, 0.5])


class TestRowPages:
    """Test the split of sweep rows across workers"""

    def test_pages_cover_rows_once(self):
        pages = row_pages(10, 3)
        assert pages == [(0, 4), (4, 8), (8, 10)]

    def test_more_workers_than_rows(self):
        assert row_pages(2, 8) == [(0, 1), (1, 2)]

    def test_single_worker(self):
        assert row_pages(7) == [(0, 7)]

    def test_paginate_clamps_page(self):
        """Test that out-of-range pages are clamped to the last page"""
        result = paginate(10, page=9, per_page=4)
        assert result['items'] == (8, 10)
        assert result['pagination']['has_next'] is False
        assert result['pagination']['prev_page'] == 2
