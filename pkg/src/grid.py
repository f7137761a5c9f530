"""
Edge quadrature, ghost-cell filling and boundary traces
"""
import math

import numpy as np

from src.errors import ConfigError
from src.models import Grid2D, QuadratureRule
from src.state import MAG, MOM, conserved_from_primitive

SUPPORTED_ORDERS = (2, 5)
GHOST_WIDTH = {2: 2, 5: 3}


def ghost_width(k):
    if k not in GHOST_WIDTH:
        raise ConfigError(f"unsupported order k={k}; choose one of {SUPPORTED_ORDERS}")
    return GHOST_WIDTH[k]


def edge_quadrature(k):
    """Midpoint rule for k=2, four-point Gauss-Lobatto for k=5"""
    if k == 2:
        nodes = np.array([0.0])
        weights = np.array([1.0])
    elif k == 5:
        r = 0.5 / math.sqrt(5.0)
        nodes = np.array([-0.5, -r, r, 0.5])
        weights = np.array([1.0, 5.0, 5.0, 1.0]) / 12.0
    else:
        raise ConfigError(f"unsupported order k={k}; choose one of {SUPPORTED_ORDERS}")
    L = math.ceil((k + 2) / 2)
    return QuadratureRule(order=k, nodes=nodes, weights=weights, w_hat1=1.0 / (L * (L - 1)))


def make_grid(nx, ny, bounds, k):
    x_lo, x_hi, y_lo, y_hi = bounds
    return Grid2D(nx, ny, x_lo, x_hi, y_lo, y_hi, ghost=ghost_width(k))


# ---------------------------------------------------
# GHOST CELLS
# ---------------------------------------------------
def _mirror(block, axis):
    """Reflect a block across a wall normal to `axis` (0 = x, 1 = y) and negate normal m, B"""
    out = np.flip(block, axis=2 - axis).copy()
    out[MOM.start + axis] *= -1.0
    out[MAG.start + axis] *= -1.0
    return out


def _fill_x(U, grid, bc, t, eos):
    g, nx = grid.ghost, grid.nx
    rows = slice(g, g + grid.ny)
    lo, hi = bc.x_lo, bc.x_hi
    if lo.kind == 'periodic':
        U[:, rows, :g] = U[:, rows, nx:nx + g]
        U[:, rows, g + nx:] = U[:, rows, g:2 * g]
        return
    for side, condition in (('lo', lo), ('hi', hi)):
        ghost = slice(0, g) if side == 'lo' else slice(g + nx, 2 * g + nx)
        edge = g if side == 'lo' else g + nx - 1
        if condition.kind == 'reflecting':
            src = slice(g, 2 * g) if side == 'lo' else slice(nx, g + nx)
            U[:, rows, ghost] = _mirror(U[:, rows, src], axis=0)
            continue
        U[:, rows, ghost] = U[:, rows, edge:edge + 1]
        if condition.kind == 'dirichlet':
            _dirichlet_cells(U, grid, condition, t, eos, (rows, ghost), along='y')


def _fill_y(U, grid, bc, t, eos):
    g, ny = grid.ghost, grid.ny
    lo, hi = bc.y_lo, bc.y_hi
    if lo.kind == 'periodic':
        U[:, :g, :] = U[:, ny:ny + g, :]
        U[:, g + ny:, :] = U[:, g:2 * g, :]
        return
    cols = slice(None)
    for side, condition in (('lo', lo), ('hi', hi)):
        ghost = slice(0, g) if side == 'lo' else slice(g + ny, 2 * g + ny)
        edge = g if side == 'lo' else g + ny - 1
        if condition.kind == 'reflecting':
            src = slice(g, 2 * g) if side == 'lo' else slice(ny, g + ny)
            U[:, ghost, cols] = _mirror(U[:, src, cols], axis=1)
            continue
        U[:, ghost, cols] = U[:, edge:edge + 1, cols]
        if condition.kind == 'dirichlet':
            _dirichlet_cells(U, grid, condition, t, eos, (ghost, cols), along='x')


def _dirichlet_cells(U, grid, condition, t, eos, index, along):
    rows, cols = index
    X, Y = grid.cell_centers(with_ghosts=True)
    X, Y = X[rows, cols], Y[rows, cols]
    mask = np.ones(X.shape, dtype=bool)
    if condition.where is not None:
        mask = np.asarray(condition.where(X if along == 'x' else Y), dtype=bool)
    if not np.any(mask):
        return
    state = conserved_from_primitive(condition.state(X, Y, t), eos)
    block = U[:, rows, cols]
    block[:, mask] = state[:, mask]
    U[:, rows, cols] = block


def fill_ghosts(U, grid, bc, t, eos):
    """Populate all ghost cells in place and return the field.

    x sides are filled over interior rows first, then y sides over the full
    padded width, so corner cells take the y-side rule.
    """
    if U.shape != (8,) + grid.padded_shape:
        raise ConfigError(f"field shape {U.shape} does not match grid {grid.padded_shape}")
    _fill_x(U, grid, bc, t, eos)
    _fill_y(U, grid, bc, t, eos)
    return U


# ---------------------------------------------------
# BOUNDARY TRACES
# ---------------------------------------------------
def _reflect_trace(trace, axis):
    out = trace.copy()
    out[MOM.start + axis] *= -1.0
    out[MAG.start + axis] *= -1.0
    return out


def _dirichlet_trace(inner, condition, X, Y, t, eos, along):
    out = inner.copy()
    mask = np.ones(X.shape, dtype=bool)
    if condition.where is not None:
        mask = np.asarray(condition.where(X if along == 'x' else Y), dtype=bool)
    if np.any(mask):
        state = conserved_from_primitive(condition.state(X, Y, t), eos)
        out[:, mask] = state[:, mask]
    return out


def apply_trace_boundaries(traces, grid, bc, quad, t, eos):
    """Set the outer traces on the four domain sides (in place) and return the set"""
    nodes = quad.nodes
    # vertical sides: nodes run along y
    ys = grid.y_centers()[:, None] + nodes[None, :] * grid.dy
    for name, condition, x_edge in (('x_lo', bc.x_lo, grid.x_lo), ('x_hi', bc.x_hi, grid.x_hi)):
        inner = traces.west[:, :, 0] if name == 'x_lo' else traces.east[:, :, -1]
        if condition.kind == 'periodic':
            outer = traces.east[:, :, -1] if name == 'x_lo' else traces.west[:, :, 0]
            value = outer.copy()
        elif condition.kind == 'outflow':
            value = inner.copy()
        elif condition.kind == 'reflecting':
            value = _reflect_trace(inner, 0)
        else:
            value = _dirichlet_trace(inner, condition, np.full_like(ys, x_edge), ys, t, eos, 'y')
        setattr(traces, name, value)

    xs = grid.x_centers()[:, None] + nodes[None, :] * grid.dx
    for name, condition, y_edge in (('y_lo', bc.y_lo, grid.y_lo), ('y_hi', bc.y_hi, grid.y_hi)):
        inner = traces.south[:, 0] if name == 'y_lo' else traces.north[:, -1]
        if condition.kind == 'periodic':
            outer = traces.north[:, -1] if name == 'y_lo' else traces.south[:, 0]
            value = outer.copy()
        elif condition.kind == 'outflow':
            value = inner.copy()
        elif condition.kind == 'reflecting':
            value = _reflect_trace(inner, 1)
        else:
            value = _dirichlet_trace(inner, condition, xs, np.full_like(xs, y_edge), t, eos, 'x')
        setattr(traces, name, value)
    return traces
