"""
Data models shared by the solver modules
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from src.errors import ConfigError, ContractError

BOUNDARY_KINDS = ('periodic', 'outflow', 'reflecting', 'dirichlet')


# ==================== MESH ====================

@dataclass(frozen=True)
class Grid2D:
    """Uniform Cartesian mesh with ghost layers"""
    nx: int
    ny: int
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    ghost: int = 3

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ConfigError(f"grid needs at least one cell per axis, got {self.nx}x{self.ny}")
        if not (self.x_hi > self.x_lo and self.y_hi > self.y_lo):
            raise ConfigError("grid bounds must satisfy x_hi > x_lo and y_hi > y_lo")
        if self.ghost < 1:
            raise ConfigError("ghost width must be positive")

    def __repr__(self):
        return f'<Grid2D {self.nx}x{self.ny} g={self.ghost}>'

    @property
    def dx(self):
        return (self.x_hi - self.x_lo) / self.nx

    @property
    def dy(self):
        return (self.y_hi - self.y_lo) / self.ny

    @property
    def area(self):
        return self.dx * self.dy

    @property
    def shape(self):
        """Interior shape (ny, nx)"""
        return (self.ny, self.nx)

    @property
    def padded_shape(self):
        return (self.ny + 2 * self.ghost, self.nx + 2 * self.ghost)

    @property
    def interior(self):
        g = self.ghost
        return (slice(None), slice(g, g + self.ny), slice(g, g + self.nx))

    def x_centers(self, with_ghosts=False):
        g = self.ghost if with_ghosts else 0
        return self.x_lo + (np.arange(-g, self.nx + g) + 0.5) * self.dx

    def y_centers(self, with_ghosts=False):
        g = self.ghost if with_ghosts else 0
        return self.y_lo + (np.arange(-g, self.ny + g) + 0.5) * self.dy

    def cell_centers(self, with_ghosts=False):
        """Meshgrid (X, Y) of cell centers, shape (ny, nx)"""
        return np.meshgrid(self.x_centers(with_ghosts), self.y_centers(with_ghosts))

    def empty_field(self):
        return np.zeros((8,) + self.padded_shape)

    def with_ghost(self, ghost):
        return Grid2D(self.nx, self.ny, self.x_lo, self.x_hi, self.y_lo, self.y_hi, ghost)

    def to_dict(self):
        return {
            'nx': self.nx, 'ny': self.ny,
            'x_lo': self.x_lo, 'x_hi': self.x_hi,
            'y_lo': self.y_lo, 'y_hi': self.y_hi,
            'ghost': self.ghost,
        }


@dataclass(frozen=True)
class QuadratureRule:
    """Edge quadrature plus the Gauss-Lobatto weight governing the CFL bound"""
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    w_hat1: float

    @property
    def Q(self):
        return len(self.nodes)

    def to_dict(self):
        return {
            'order': self.order,
            'nodes': self.nodes.tolist(),
            'weights': self.weights.tolist(),
            'w_hat1': self.w_hat1,
        }


# ==================== BOUNDARIES ====================

@dataclass(frozen=True)
class SideCondition:
    """Condition on one side of the domain.

    Dirichlet sides carry `state(x, y, t) -> primitive array` and an optional
    `where(s) -> bool array` selecting the part of the side (s = coordinate
    along the side) that receives the state; the rest behaves as outflow.
    """
    kind: str
    state: Optional[Callable] = None
    where: Optional[Callable] = None

    def __post_init__(self):
        if not SideCondition.validate_kind(self.kind):
            raise ConfigError(f"unknown boundary kind '{self.kind}'")
        if self.kind == 'dirichlet' and self.state is None:
            raise ConfigError("dirichlet boundary needs a state function")

    @staticmethod
    def validate_kind(kind):
        return kind in BOUNDARY_KINDS


@dataclass(frozen=True)
class BoundarySpec:
    x_lo: SideCondition
    x_hi: SideCondition
    y_lo: SideCondition
    y_hi: SideCondition

    def __post_init__(self):
        for lo, hi, axis in ((self.x_lo, self.x_hi, 'x'), (self.y_lo, self.y_hi, 'y')):
            if (lo.kind == 'periodic') != (hi.kind == 'periodic'):
                raise ConfigError(f"periodic boundary on {axis} must be set on both sides")

    @classmethod
    def uniform(cls, kind):
        side = SideCondition(kind)
        return cls(side, side, side, side)

    def to_dict(self):
        return {name: getattr(self, name).kind for name in ('x_lo', 'x_hi', 'y_lo', 'y_hi')}


# ==================== TRACES ====================

@dataclass
class InterfaceSet:
    """Inner traces of every cell at its edge quadrature nodes.

    east/west/north/south have shape (8, ny, nx, Q): east is U^- at i+1/2,
    west is U^+ at i-1/2, north is U^- at j+1/2, south is U^+ at j-1/2.
    The outer arrays hold the traces just outside the domain: x_lo/x_hi have
    shape (8, ny, Q), y_lo/y_hi have shape (8, nx, Q).
    """
    east: np.ndarray
    west: np.ndarray
    north: np.ndarray
    south: np.ndarray
    x_lo: Optional[np.ndarray] = None
    x_hi: Optional[np.ndarray] = None
    y_lo: Optional[np.ndarray] = None
    y_hi: Optional[np.ndarray] = None
    fallbacks: int = 0

    INNER = ('east', 'west', 'north', 'south')
    OUTER = ('x_lo', 'x_hi', 'y_lo', 'y_hi')

    @property
    def Q(self):
        return self.east.shape[-1]

    def copy(self):
        kwargs = {name: None if getattr(self, name) is None else getattr(self, name).copy()
                  for name in self.INNER + self.OUTER}
        return InterfaceSet(fallbacks=self.fallbacks, **kwargs)

    def inner(self):
        """All inner traces of each cell stacked on the last axis: (8, ny, nx, 4Q)"""
        return np.concatenate([self.east, self.west, self.north, self.south], axis=-1)

    def _require_outer(self):
        if any(getattr(self, name) is None for name in self.OUTER):
            raise ContractError("boundary traces have not been applied")

    def x_edges(self):
        """(U^-, U^+) on every vertical edge, shape (8, ny, nx + 1, Q)"""
        self._require_outer()
        minus = np.concatenate([self.x_lo[:, :, None], self.east], axis=2)
        plus = np.concatenate([self.west, self.x_hi[:, :, None]], axis=2)
        return minus, plus

    def y_edges(self):
        """(U^-, U^+) on every horizontal edge, shape (8, ny + 1, nx, Q)"""
        self._require_outer()
        minus = np.concatenate([self.y_lo[:, None], self.north], axis=1)
        plus = np.concatenate([self.south, self.y_hi[:, None]], axis=1)
        return minus, plus

    @classmethod
    def from_cells(cls, U, Q):
        """Trace set where every inner trace equals its cell average"""
        U = np.asarray(U, dtype=float)
        tiled = np.repeat(U[..., None], Q, axis=-1)
        return cls(tiled.copy(), tiled.copy(), tiled.copy(), tiled.copy())


# ==================== STEPPING ====================

@dataclass
class StepContext:
    """Step size and viscosity parameters of one Runge-Kutta stage"""
    dt: float
    alpha1: float
    alpha2: float
    dx: float
    dy: float

    @property
    def lambda1(self):
        return self.alpha1 * self.dt / self.dx

    @property
    def lambda2(self):
        return self.alpha2 * self.dt / self.dy

    @property
    def lam(self):
        return self.lambda1 + self.lambda2

    def lambda_ratios(self):
        """(lambda1/lambda, lambda2/lambda); independent of dt"""
        s1 = self.alpha1 / self.dx
        s2 = self.alpha2 / self.dy
        return s1 / (s1 + s2), s2 / (s1 + s2)

    def cfl_number(self):
        return self.dt * (self.alpha1 / self.dx + self.alpha2 / self.dy)

    def to_dict(self):
        return {'dt': self.dt, 'alpha1': self.alpha1, 'alpha2': self.alpha2,
                'lambda1': self.lambda1, 'lambda2': self.lambda2}


@dataclass
class PiQuantities:
    """Edge means of the inner traces and the interior state Pi_ij"""
    east: np.ndarray
    west: np.ndarray
    north: np.ndarray
    south: np.ndarray
    interior: Optional[np.ndarray] = None


@dataclass(frozen=True)
class ViscosityEstimate:
    alpha_hat1: float
    alpha_hat2: float
    beta1: float
    beta2: float

    @property
    def alpha1(self):
        return self.alpha_hat1 + self.beta1

    @property
    def alpha2(self):
        return self.alpha_hat2 + self.beta2

    def scaled(self, factor):
        return ViscosityEstimate(self.alpha_hat1 * factor, self.alpha_hat2 * factor,
                                 self.beta1 * factor, self.beta2 * factor)


@dataclass
class StageReport:
    """Residual of one stage together with what produced it"""
    rhs: np.ndarray
    flux_divergence: np.ndarray
    source: np.ndarray
    traces: InterfaceSet
    context: StepContext
    eps_div: float
    limiter_hits: int = 0
    fallbacks: int = 0
    rescaled: bool = False
    halvings: int = 0
    fluxes: Optional[object] = None


@dataclass
class DiagRecord:
    t: float
    dt: float
    eps_div: float
    totals: dict
    limiter_hits: int = 0
    alpha1: float = 0.0
    alpha2: float = 0.0
    redos: int = 0
    fallbacks: int = 0
    rescales: int = 0
    stage_eps_div: list = field(default_factory=list)

    LOG_COLUMNS = ('t', 'dt', 'eps_div', 'mass', 'momx', 'momy', 'energy', 'limiter_hits',
                   'fallbacks', 'rescales', 'eps_div_s1', 'eps_div_s2', 'eps_div_s3')

    def to_row(self):
        return [self.t, self.dt, self.eps_div, self.totals['mass'], self.totals['momx'],
                self.totals['momy'], self.totals['energy'], self.limiter_hits,
                self.fallbacks, self.rescales] + self._stage_row()

    def _stage_row(self):
        stages = list(self.stage_eps_div[:3])
        return stages + [float('nan')] * (3 - len(stages))

    def to_dict(self):
        return {
            't': self.t, 'dt': self.dt, 'eps_div': self.eps_div,
            'totals': dict(self.totals), 'limiter_hits': self.limiter_hits,
            'alpha1': self.alpha1, 'alpha2': self.alpha2, 'redos': self.redos,
            'fallbacks': self.fallbacks, 'rescales': self.rescales,
            'stage_eps_div': list(self.stage_eps_div),
        }


@dataclass
class RunState:
    t: float
    step: int
    cellavg: np.ndarray
    ctx: Optional[StepContext] = None
    stats: list = field(default_factory=list)
