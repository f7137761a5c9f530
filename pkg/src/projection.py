"""
Discrete divergence of interface traces and the closed-form divergence-free projection
"""
import numpy as np

B1, B2 = 4, 5


def discrete_divergence(traces, grid, quad):
    """Quadrature divergence of each cell's own inner traces, shape (ny, nx)"""
    w = quad.weights
    div_x = (traces.east[B1] - traces.west[B1]) @ w / grid.dx
    div_y = (traces.north[B2] - traces.south[B2]) @ w / grid.dy
    return div_x + div_y


def projection_corrections(traces, grid, quad):
    """(A1, A2) per cell, shape (ny, nx) each"""
    d = discrete_divergence(traces, grid, quad)
    ratio = grid.dx / grid.dy
    a1 = grid.dx * d / (2.0 * (1.0 + ratio ** 2))
    a2 = grid.dy * d / (2.0 * (1.0 + ratio ** -2))
    return a1, a2


def ddf_project(traces, grid, quad):
    """Return a copy of `traces` whose inner traces satisfy the discrete divergence-free condition.

    Each cell corrects only its own four inner traces, at every node, and only
    the normal magnetic component on each edge.
    """
    a1, a2 = projection_corrections(traces, grid, quad)
    out = traces.copy()
    out.east[B1] -= a1[..., None]
    out.west[B1] += a1[..., None]
    out.north[B2] -= a2[..., None]
    out.south[B2] += a2[..., None]
    return out


def projection_matrix(dx=1.0, dy=1.0):
    """Projection acting on (B1 left, B1 right, B2 bottom, B2 top) of one cell"""
    ratio = dx / dy
    eta = 1.0 / (2.0 * (1.0 + ratio ** 2))
    mu = ratio * eta
    zeta = 1.0 / (2.0 * (1.0 + ratio ** -2))
    return np.array([
        [1.0 - eta, eta, -mu, mu],
        [eta, 1.0 - eta, mu, -mu],
        [-mu, mu, 1.0 - zeta, zeta],
        [mu, -mu, zeta, 1.0 - zeta],
    ])


def projection_matrix_check(dx=1.0, dy=1.0, tol=1e-14):
    """Self-test: the per-cell projection matrix is idempotent"""
    P = projection_matrix(dx, dy)
    return bool(np.max(np.abs(P @ P - P)) <= tol)
