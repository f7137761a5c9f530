"""
Interface reconstruction: van Albada linear traces (k=2) and two-step
dimension-by-dimension WENO-Z traces at the edge Gauss-Lobatto nodes (k=5).
"""
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from src.characteristics import characteristic_basis
from src.errors import ContractError
from src.models import InterfaceSet
from src.utils.pagination import row_pages

WENO_EPS = 1e-12
WENO_POWER = 2


class SlopePair(NamedTuple):
    sx: np.ndarray
    sy: np.ndarray


# ---------------------------------------------------
# SECOND ORDER
# ---------------------------------------------------
def _van_albada(left, right, eps):
    return ((right * right + eps) * left + (left * left + eps) * right) / (
        left * left + right * right + 2.0 * eps)


def van_albada_slopes(U, grid):
    """Limited slopes of the interior cells, each of shape (8, ny, nx)"""
    g, nx, ny = grid.ghost, grid.nx, grid.ny
    rows, cols = slice(g, g + ny), slice(g, g + nx)
    c = U[:, rows, cols]
    sx = _van_albada((c - U[:, rows, g - 1:g - 1 + nx]) / grid.dx,
                     (U[:, rows, g + 1:g + 1 + nx] - c) / grid.dx, 3.0 * grid.dx)
    sy = _van_albada((c - U[:, g - 1:g - 1 + ny, cols]) / grid.dy,
                     (U[:, g + 1:g + 1 + ny, cols] - c) / grid.dy, 3.0 * grid.dy)
    return SlopePair(sx, sy)


def linear_interface_values(U, slopes, grid):
    """Midpoint traces of the piecewise linear reconstruction (Q=1)"""
    c = U[grid.interior]
    hx = 0.5 * grid.dx * slopes.sx
    hy = 0.5 * grid.dy * slopes.sy
    return InterfaceSet(east=(c + hx)[..., None], west=(c - hx)[..., None],
                        north=(c + hy)[..., None], south=(c - hy)[..., None])


# ---------------------------------------------------
# WENO-Z KERNELS
# ---------------------------------------------------
def _substencil_coefficients(xi):
    """Point value at xi of the three quadratics fitted to cells (-2..0), (-1..1), (0..2)"""
    q = xi * xi - 1.0 / 12.0
    return np.array([
        [0.5 * xi + 0.5 * q, -2.0 * xi - q, 1.0 + 1.5 * xi + 0.5 * q],
        [-0.5 * xi + 0.5 * q, 1.0 - q, 0.5 * xi + 0.5 * q],
        [1.0 - 1.5 * xi + 0.5 * q, 2.0 * xi - q, -0.5 * xi + 0.5 * q],
    ])


@lru_cache(maxsize=None)
def linear_weights(xi):
    """Weights d_r combining the three quadratics into the five-cell quartic at xi"""
    k = np.arange(-2, 3, dtype=float)[:, None]
    n = np.arange(5)
    averages = ((k + 0.5) ** (n + 1) - (k - 0.5) ** (n + 1)) / (n + 1)
    quartic = np.linalg.solve(averages.T, float(xi) ** n)

    coeffs = _substencil_coefficients(float(xi))
    embed = np.zeros((5, 3))
    for r in range(3):
        embed[r:r + 3, r] = coeffs[r]
    weights, *_ = np.linalg.lstsq(embed, quartic, rcond=None)
    return weights


def smoothness_indicators(v):
    v0, v1, v2, v3, v4 = v
    b0 = 13.0 / 12.0 * (v0 - 2.0 * v1 + v2) ** 2 + 0.25 * (v0 - 4.0 * v1 + 3.0 * v2) ** 2
    b1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) ** 2 + 0.25 * (v1 - v3) ** 2
    b2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) ** 2 + 0.25 * (3.0 * v2 - 4.0 * v3 + v4) ** 2
    return b0, b1, b2


def weno5z_nodes(v, nodes, linear=False):
    """WENO-Z point values at relative positions `nodes` of the center cell.

    v has shape (5, ...) holding the averages of cells -2..2; the result has
    shape (len(nodes), ...).
    """
    v = np.asarray(v, dtype=float)
    beta = smoothness_indicators(v)
    tau = np.abs(beta[0] - beta[2])
    boost = [1.0 + (tau / (b + WENO_EPS)) ** WENO_POWER for b in beta]

    out = np.empty((len(nodes),) + v.shape[1:])
    for q, xi in enumerate(nodes):
        d = linear_weights(float(xi))
        if np.any(d <= 0.0):
            raise ContractError(f"linear weights at node {xi} are not all positive")
        coeffs = _substencil_coefficients(float(xi))
        polys = [coeffs[r, 0] * v[r] + coeffs[r, 1] * v[r + 1] + coeffs[r, 2] * v[r + 2]
                 for r in range(3)]
        if linear:
            out[q] = d[0] * polys[0] + d[1] * polys[1] + d[2] * polys[2]
            continue
        alpha = [d[r] * boost[r] for r in range(3)]
        total = alpha[0] + alpha[1] + alpha[2]
        out[q] = (alpha[0] * polys[0] + alpha[1] * polys[1] + alpha[2] * polys[2]) / total
    return out


def weno5z_point(left2, left1, c, right1, right2, bias='minus'):
    """Edge value of the center cell: right edge for bias 'minus', left edge for 'plus'"""
    if bias not in ('minus', 'plus'):
        raise ContractError(f"bias must be 'minus' or 'plus', got {bias!r}")
    xi = 0.5 if bias == 'minus' else -0.5
    return weno5z_nodes(np.array([left2, left1, c, right1, right2]), (xi,))[0]


# ---------------------------------------------------
# TWO-STEP RECONSTRUCTION
# ---------------------------------------------------
def _weno_characteristic(stencil, R, L, nodes):
    """Reconstruct in characteristic variables. stencil (5, 8, A, B); R, L (A, B, 8, 8)"""
    w = np.einsum('abij,sjab->siab', L, stencil)
    rec = weno5z_nodes(w, nodes)
    return np.einsum('abij,qjab->qiab', R, rec)


def _traces_along(U, g, normal_dir, tangent_dir, nodes, chardecomp, eos, workers):
    """Low/high traces of every interior cell with the sweep normal on the last axis.

    U has shape (8, T, N) including ghosts; results have shape (8, T-2g, N-2g, Q)
    with nodes running along the tangential axis.  In characteristic mode every
    stencil is projected with the eigenvectors of its target cell's average, so
    both edges and all nodes of a cell share one basis per direction.
    """
    _, T, N = U.shape
    nt, nn = T - 2 * g, N - 2 * g
    low = np.empty((8, nt, nn, len(nodes)))
    high = np.empty_like(low)

    def sweep(page):
        t0, t1 = page
        rows = t1 - t0
        band = U[:, g + t0 - 2:g + t1 + 2, :]
        cells = np.stack([band[:, :, g - 2 + s:g - 2 + s + nn] for s in range(5)])
        fallbacks = 0
        if chardecomp:
            center = band[:, :, g:g + nn]
            R, L, fallbacks = characteristic_basis(center, normal_dir, eos, count=np.s_[2:-2])
            low_avg, high_avg = _weno_characteristic(cells, R, L, (-0.5, 0.5))
            Rt, Lt, more = characteristic_basis(center[:, 2:-2], tangent_dir, eos)
            fallbacks += more
        else:
            low_avg, high_avg = weno5z_nodes(cells, (-0.5, 0.5))

        for avg, out in ((high_avg, high), (low_avg, low)):
            stencil = np.stack([avg[:, s:s + rows] for s in range(5)])
            if chardecomp:
                values = _weno_characteristic(stencil, Rt, Lt, nodes)
            else:
                values = weno5z_nodes(stencil, nodes)
            out[:, t0:t1] = np.moveaxis(values, 0, -1)
        return fallbacks

    pages = row_pages(nt, workers)
    if workers > 1 and len(pages) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            fallbacks = sum(pool.map(sweep, pages))
    else:
        fallbacks = sum(sweep(page) for page in pages)
    return low, high, fallbacks


def weno5z_interface_values(U, grid, quad, chardecomp, eos, workers=1):
    """Traces at the quadrature nodes of every edge from padded cell averages"""
    if grid.ghost < 3:
        raise ContractError("WENO reconstruction needs three ghost layers")
    nodes = tuple(float(x) for x in quad.nodes)
    g = grid.ghost
    west, east, fb_x = _traces_along(U, g, 1, 2, nodes, chardecomp, eos, workers)
    south, north, fb_y = _traces_along(np.swapaxes(U, 1, 2), g, 2, 1, nodes, chardecomp, eos, workers)
    return InterfaceSet(east=east, west=west,
                        north=np.swapaxes(north, 1, 2), south=np.swapaxes(south, 1, 2),
                        fallbacks=fb_x + fb_y)


def reconstruct(U, grid, quad, eos, chardecomp=False, workers=1):
    """Dispatch on the quadrature order"""
    if quad.order == 2:
        return linear_interface_values(U, van_albada_slopes(U, grid), grid)
    return weno5z_interface_values(U, grid, quad, chardecomp, eos, workers)
