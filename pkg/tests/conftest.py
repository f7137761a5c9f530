"""
Test configuration and fixtures
"""
import os

os.environ.setdefault('MHD_ENV', 'testing')

import numpy as np  # noqa: E402
import pytest  # noqa: E402
from click.testing import CliRunner  # noqa: E402

from src.app import create_app  # noqa: E402
from src.grid import edge_quadrature, make_grid  # noqa: E402
from src.models import BoundarySpec, InterfaceSet, StepContext  # noqa: E402
from src.state import IdealEos, conserved_from_primitive  # noqa: E402


@pytest.fixture(scope='function')
def app():
    """Create and configure a test command group"""
    return create_app('testing')


@pytest.fixture(scope='function')
def runner():
    """Create a test CLI runner"""
    return CliRunner()


@pytest.fixture
def settings(app):
    return app.settings


# ==================== NUMERICS FIXTURES ====================

@pytest.fixture
def eos():
    return IdealEos(5.0 / 3.0)


@pytest.fixture
def quad2():
    return edge_quadrature(2)


@pytest.fixture
def quad5():
    return edge_quadrature(5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def random_states(rng, eos):
    """Factory for admissible conserved states of a given trailing shape"""
    def make(shape):
        shape = tuple(np.atleast_1d(shape))
        W = np.empty((8,) + shape)
        W[0] = rng.uniform(0.2, 2.0, shape)
        W[1:4] = rng.uniform(-1.0, 1.0, (3,) + shape)
        W[4:7] = rng.uniform(-1.0, 1.0, (3,) + shape)
        W[7] = rng.uniform(0.05, 1.5, shape)
        return conserved_from_primitive(W, eos)
    return make


@pytest.fixture
def random_traces(rng, random_states):
    """Factory for an InterfaceSet whose traces scatter around admissible cell averages"""
    def make(ny, nx, Q, spread=0.1):
        cells = random_states((ny, nx))
        traces = InterfaceSet.from_cells(cells, Q)
        for name in traces.INNER:
            arr = getattr(traces, name)
            arr *= 1.0 + spread * rng.standard_normal(arr.shape)
        return cells, traces
    return make


@pytest.fixture
def unit_grid5():
    """8x8 periodic-ready grid on the unit square for k=5"""
    return make_grid(8, 8, (0.0, 1.0, 0.0, 1.0), 5)


@pytest.fixture
def unit_grid2():
    return make_grid(8, 8, (0.0, 1.0, 0.0, 1.0), 2)


@pytest.fixture
def periodic():
    return BoundarySpec.uniform('periodic')


@pytest.fixture
def step_context():
    return StepContext(dt=1e-3, alpha1=1.0, alpha2=2.0, dx=1.0, dy=1.0)


@pytest.fixture
def primitive():
    """Factory for a primitive state broadcast to `shape`"""
    def make(rho, v=(0.0, 0.0, 0.0), B=(0.0, 0.0, 0.0), p=1.0, shape=()):
        W = np.empty((8,) + tuple(shape))
        for c, value in enumerate((rho, *v, *B, p)):
            W[c] = value
        return W
    return make
