"""
Benchmark problems: initial data, boundary conditions and exact solutions
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from src.errors import ConfigError
from src.models import BoundarySpec, SideCondition
from src.state import conserved_from_primitive, is_admissible

GAUSS_POINTS = 5


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    bounds: tuple
    resolution: tuple
    gamma: float
    t_end: float
    bc: BoundarySpec
    init: Callable
    exact: Optional[Callable] = None
    snapshots: tuple = field(default_factory=tuple)
    description: str = ''

    def to_dict(self):
        return {
            'name': self.name,
            'bounds': list(self.bounds),
            'resolution': list(self.resolution),
            'gamma': self.gamma,
            't_end': self.t_end,
            'bc': self.bc.to_dict(),
            'has_exact': self.exact is not None,
            'snapshots': list(self.snapshots),
        }


def _state(shape, rho, v1, v2, v3, b1, b2, b3, p):
    W = np.empty((8,) + shape)
    for c, value in enumerate((rho, v1, v2, v3, b1, b2, b3, p)):
        W[c] = value
    return W


# ---------------------------------------------------
# VORTEX
# ---------------------------------------------------
VORTEX_STRENGTH = 5.389489439


def vortex_state(x, y):
    """MHD vortex on the (1, 1) background; the core pressure is about 5.3e-12"""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    mu = VORTEX_STRENGTH
    r2 = x * x + y * y
    bump = np.exp(0.5 * (1.0 - r2))
    dv = mu / (math.sqrt(2.0) * math.pi) * bump
    dB = mu / (2.0 * math.pi) * bump
    dp = -mu ** 2 * (1.0 + r2) / (8.0 * math.pi ** 2) * np.exp(1.0 - r2)
    return _state(x.shape, 1.0, 1.0 - dv * y, 1.0 + dv * x, 0.0, -dB * y, dB * x, 0.0, 1.0 + dp)


def _wrap(s, lo, hi):
    return lo + np.mod(s - lo, hi - lo)


def vortex_exact(x, y, t):
    return vortex_state(_wrap(np.asarray(x) - t, -10.0, 10.0), _wrap(np.asarray(y) - t, -10.0, 10.0))


# ---------------------------------------------------
# ORSZAG-TANG
# ---------------------------------------------------
def orszag_tang_state(x, y, gamma=5.0 / 3.0):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return _state(x.shape, gamma ** 2, -np.sin(y), np.sin(x), 0.0,
                  -np.sin(y), np.sin(2.0 * x), 0.0, gamma)


# ---------------------------------------------------
# ROTOR
# ---------------------------------------------------
ROTOR_R1 = 0.1
ROTOR_R2 = 0.115


def rotor_state(x, y):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    dx, dy = x - 0.5, y - 0.5
    r = np.sqrt(dx * dx + dy * dy)
    inside = r <= ROTOR_R1
    taper = (r > ROTOR_R1) & (r <= ROTOR_R2)
    phi = (ROTOR_R2 - r) / (ROTOR_R2 - ROTOR_R1)
    safe_r = np.where(r > 0.0, r, 1.0)

    rho = np.where(inside, 10.0, np.where(taper, 1.0 + 9.0 * phi, 1.0))
    v1 = np.where(inside, -dy / ROTOR_R1, np.where(taper, -phi * dy / safe_r, 0.0))
    v2 = np.where(inside, dx / ROTOR_R1, np.where(taper, phi * dx / safe_r, 0.0))
    return _state(x.shape, rho, v1, v2, 0.0, 2.5 / math.sqrt(4.0 * math.pi), 0.0, 0.0, 0.5)


# ---------------------------------------------------
# BLAST
# ---------------------------------------------------
def blast_state(x, y):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    p = np.where(np.sqrt(x * x + y * y) <= 0.1, 1.0e3, 0.1)
    return _state(x.shape, 1.0, 0.0, 0.0, 0.0, 100.0 / math.sqrt(4.0 * math.pi), 0.0, 0.0, p)


# ---------------------------------------------------
# JET
# ---------------------------------------------------
JET_GAMMA = 1.4
JET_HALF_WIDTH = 0.05


def jet_ambient(x, y):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return _state(x.shape, 0.1 * JET_GAMMA, 0.0, 0.0, 0.0, 0.0, math.sqrt(200.0), 0.0, 1.0)


def jet_inflow(x, y, t=0.0):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return _state(x.shape, JET_GAMMA, 0.0, 800.0, 0.0, 0.0, math.sqrt(200.0), 0.0, 1.0)


# ---------------------------------------------------
# REGISTRY
# ---------------------------------------------------
def builtin_problems():
    periodic = BoundarySpec.uniform('periodic')
    outflow = BoundarySpec.uniform('outflow')
    jet_bc = BoundarySpec(
        x_lo=SideCondition('reflecting'),
        x_hi=SideCondition('outflow'),
        y_lo=SideCondition('dirichlet', state=jet_inflow,
                           where=lambda s: np.abs(s) <= JET_HALF_WIDTH),
        y_hi=SideCondition('outflow'),
    )
    return [
        ProblemSpec('vortex', (-10.0, 10.0, -10.0, 10.0), (40, 40), 5.0 / 3.0, 0.05, periodic,
                    init=vortex_state, exact=vortex_exact,
                    description='MHD vortex with near-vacuum core pressure'),
        ProblemSpec('orszag-tang', (0.0, 2.0 * math.pi, 0.0, 2.0 * math.pi), (200, 200),
                    5.0 / 3.0, 4.0, periodic, init=orszag_tang_state, snapshots=(2.0, 4.0),
                    description='Orszag-Tang vortex'),
        ProblemSpec('rotor', (0.0, 1.0, 0.0, 1.0), (400, 400), 5.0 / 3.0, 0.295, outflow,
                    init=rotor_state, description='dense rotating disk in ambient fluid'),
        ProblemSpec('blast', (-0.5, 0.5, -0.5, 0.5), (200, 200), 1.4, 0.01, outflow,
                    init=blast_state, description='strongly magnetized blast wave'),
        ProblemSpec('jet', (0.0, 0.5, 0.0, 1.5), (200, 600), JET_GAMMA, 0.002, jet_bc,
                    init=jet_ambient, snapshots=(0.001, 0.0015, 0.002),
                    description='high Mach jet in a strong magnetic field'),
    ]


def get_problem(name):
    for spec in builtin_problems():
        if spec.name == name:
            return spec
    names = ', '.join(p.name for p in builtin_problems())
    raise ConfigError(f"unknown problem '{name}'; choose one of: {names}")


def uniform_problem(state, bounds=(0.0, 1.0, 0.0, 1.0), gamma=5.0 / 3.0, kind='periodic',
                    resolution=(16, 16), t_end=0.1):
    """Constant primitive state everywhere"""
    values = tuple(float(v) for v in state)

    def init(x, y):
        x = np.asarray(x, dtype=float)
        return _state(np.broadcast(x, y).shape, *values)

    return ProblemSpec('uniform', bounds, resolution, gamma, t_end, BoundarySpec.uniform(kind),
                       init=init, exact=lambda x, y, t: init(x, y))


# ---------------------------------------------------
# CELL AVERAGES
# ---------------------------------------------------
def _cell_average(fn, grid, eos, points):
    nodes, weights = np.polynomial.legendre.leggauss(points)
    nodes, weights = 0.5 * nodes, 0.5 * weights
    X, Y = grid.cell_centers()
    total = np.zeros((8,) + grid.shape)
    for a, wa in zip(nodes, weights):
        for b, wb in zip(nodes, weights):
            W = fn(X + a * grid.dx, Y + b * grid.dy)
            total += wa * wb * conserved_from_primitive(W, eos)
    return total


def init_cell_averages(spec, grid, eos, points=GAUSS_POINTS):
    """Padded field of cell averages by tensor-product Gauss quadrature; ghosts left at zero"""
    cells = _cell_average(spec.init, grid, eos, points)
    ok = is_admissible(cells)
    if not np.all(ok):
        cell = tuple(int(c) for c in np.argwhere(~ok)[0])
        raise ConfigError(f"problem '{spec.name}' has an inadmissible initial average at {cell}")
    U = grid.empty_field()
    U[grid.interior] = cells
    return U


def exact_cell_averages(spec, grid, eos, t, points=GAUSS_POINTS):
    """Interior cell averages of the exact solution at time t"""
    if spec.exact is None:
        raise ConfigError(f"problem '{spec.name}' has no exact solution")
    return _cell_average(lambda x, y: spec.exact(x, y, t), grid, eos, points)
