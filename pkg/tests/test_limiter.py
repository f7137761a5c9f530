"""
Tests for the positivity-preserving limiter
"""
import numpy as np
import pytest

from src.errors import ContractError, DomainError
from src.grid import make_grid
from src.limiter import (EPS_FLOOR, compute_pi, limit_density, pp_limit,
                         postcondition_violations)
from src.models import InterfaceSet
from src.projection import ddf_project, discrete_divergence
from src.state import internal_energy

pytestmark = [pytest.mark.unit, pytest.mark.limiter]


class TestComputePi:
    """Test edge means and the interior state"""

    def test_pi_of_constant_traces_is_cell_average(self, random_states, quad5, step_context):
        """Test Pi_ij = U_bar when all traces equal the cell average"""
        cells = random_states((3, 3))
        pi = compute_pi(InterfaceSet.from_cells(cells, 4), cells, step_context, quad5)
        np.testing.assert_allclose(pi.interior, cells, rtol=1e-14)
        np.testing.assert_allclose(pi.east, cells, rtol=1e-14)

    def test_pi_undefined_at_second_order(self, random_states, quad2, step_context):
        """Test that the interior state is refused for k=2"""
        cells = random_states((2, 2))
        with pytest.raises(ContractError):
            compute_pi(InterfaceSet.from_cells(cells, 1), cells, step_context, quad2, interior=True)

    def test_high_order_limiting_needs_pi(self, random_states, quad5, step_context):
        """Test that k=5 limiting without Pi_ij is a contract violation"""
        cells = random_states((2, 2))
        traces = InterfaceSet.from_cells(cells, 4)
        pi = compute_pi(traces, cells, step_context, quad5, interior=False)
        with pytest.raises(ContractError):
            limit_density(traces, cells, pi, 5)


class TestPpLimit:
    """Test both limiter steps"""

    def test_admissible_traces_untouched(self, random_traces, quad5, step_context):
        """Test that nearly constant admissible traces pass through bit for bit"""
        cells, traces = random_traces(4, 4, 4, spread=1e-3)
        limited, stats = pp_limit(traces, cells, step_context, quad5)
        assert stats.hits == 0
        for name in traces.INNER:
            np.testing.assert_array_equal(getattr(limited, name), getattr(traces, name))

    def test_theta_pulls_density_to_floor(self, quad2):
        """Test theta = (rho_bar - eps)/(rho_bar - rho_min) on a single cell"""
        cells = np.zeros((8, 1, 1))
        cells[0] = 1.0
        cells[7] = 1.0
        traces = InterfaceSet.from_cells(cells, 1)
        traces.east[0] = -1.0
        limited, stats = pp_limit(traces, cells, None, quad2)
        assert stats.theta_density[0, 0] == pytest.approx(0.5, rel=1e-12)
        assert limited.east[0, 0, 0, 0] == pytest.approx(EPS_FLOOR, abs=1e-15)
        assert limited.west[0, 0, 0, 0] == 1.0

    def test_negative_density_trace(self, random_states, quad5, step_context):
        """Test that a negative trace density is lifted in its own cell only"""
        cells = random_states((2, 2))
        traces = InterfaceSet.from_cells(cells, 4)
        traces.east[0, 0, 0, 1] = -0.5 * cells[0, 0, 0]
        limited, stats = pp_limit(traces, cells, step_context, quad5)
        assert stats.theta_density[0, 0] < 1.0
        assert np.all(stats.theta_density.ravel()[1:] == 1.0)
        assert limited.east[0, 0, 0].min() > 0.0
        assert not postcondition_violations(limited, cells, step_context, quad5).any()

    def test_negative_internal_energy_trace(self, random_states, quad5, step_context):
        """Test that a trace with E = 0 is pulled back to positive internal energy"""
        cells = random_states((2, 2))
        traces = InterfaceSet.from_cells(cells, 4)
        traces.north[7, 1, 1, 2] = 0.0
        assert internal_energy(traces.north[:, 1, 1, 2]) < 0.0
        limited, stats = pp_limit(traces, cells, step_context, quad5)
        assert stats.theta_energy[1, 1] < 1.0
        assert stats.hits == 1
        assert internal_energy(limited.north[:, 1, 1]).min() >= 0.5 * EPS_FLOOR
        assert not postcondition_violations(limited, cells, step_context, quad5).any()

    @pytest.mark.parametrize('spread', [0.5, 1.5, 4.0])
    def test_adversarial_traces(self, random_traces, quad5, step_context, spread):
        """Test the postconditions on wildly perturbed traces"""
        cells, traces = random_traces(6, 6, 4, spread=spread)
        limited, stats = pp_limit(traces, cells, step_context, quad5)
        assert stats.hits > 0
        assert not postcondition_violations(limited, cells, step_context, quad5).any()

    def test_ten_thousand_adversarial_sets(self, random_traces, quad5, step_context):
        """Test the postconditions cell by cell on ten thousand perturbed trace sets"""
        cells, traces = random_traces(100, 100, 4, spread=2.0)
        limited, stats = pp_limit(traces, cells, step_context, quad5)
        assert stats.hits > 1000
        bad = postcondition_violations(limited, cells, step_context, quad5)
        assert not bad.any(), np.argwhere(bad)[:5]

    def test_adversarial_traces_second_order(self, random_traces, quad2):
        """Test the postconditions at k=2 where only the traces are checked"""
        cells, traces = random_traces(6, 6, 1, spread=1.5)
        limited, _ = pp_limit(traces, cells, None, quad2)
        assert not postcondition_violations(limited, cells, None, quad2).any()

    def test_limiting_keeps_projected_traces_divergence_free(self, random_traces, quad5,
                                                             step_context):
        """Test that affine blending keeps the discrete divergence at zero"""
        grid = make_grid(6, 6, (0.0, 1.0, 0.0, 1.0), 5)
        cells, traces = random_traces(6, 6, 4, spread=1.0)
        projected = ddf_project(traces, grid, quad5)
        limited, stats = pp_limit(projected, cells, step_context, quad5)
        assert stats.hits > 0
        scale = np.abs(projected.inner()[4:6]).max() / grid.dx
        np.testing.assert_allclose(discrete_divergence(limited, grid, quad5), 0.0,
                                   atol=1e-13 * scale)

    def test_inadmissible_cell_average(self, random_traces, quad5, step_context):
        """Test that a cell average outside the admissible set raises DomainError"""
        cells, traces = random_traces(3, 3, 4)
        cells[0, 2, 1] = -1.0
        with pytest.raises(DomainError) as exc:
            pp_limit(traces, cells, step_context, quad5)
        assert exc.value.cell == (2, 1)
