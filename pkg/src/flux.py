"""
Lax-Friedrichs edge fluxes, global viscosity parameters and the Godunov-Powell source
"""
from dataclasses import dataclass

import numpy as np

from src.errors import DomainError
from src.models import ViscosityEstimate
from src.state import RHO, pair_viscosity, physical_flux, powell_source_vector


@dataclass
class EdgeFluxes:
    """Quadrature-averaged numerical fluxes: fx (8, ny, nx + 1), fy (8, ny + 1, nx)"""
    fx: np.ndarray
    fy: np.ndarray

    def divergence(self, grid):
        return (-(self.fx[:, :, 1:] - self.fx[:, :, :-1]) / grid.dx
                - (self.fy[:, 1:] - self.fy[:, :-1]) / grid.dy)


def lax_friedrichs(Um, Up, direction, alpha, eos):
    """(F(U-) + F(U+) - alpha (U+ - U-)) / 2"""
    if not alpha > 0.0:
        raise DomainError(f"Lax-Friedrichs viscosity must be positive, got {alpha}")
    Um = np.asarray(Um, dtype=float)
    Up = np.asarray(Up, dtype=float)
    return 0.5 * (physical_flux(Um, direction, eos) + physical_flux(Up, direction, eos)
                  - alpha * (Up - Um))


def _jump_bound(minus, plus, component):
    mean_rho = 0.5 * (minus[RHO] + plus[RHO])
    if np.any(~(mean_rho > 0.0)):
        raise DomainError("non-positive mean density across an edge")
    return float(np.max(np.abs(plus[component] - minus[component]) / (2.0 * np.sqrt(mean_rho))))


def global_viscosity(traces, quad, eos, discriminant='printed'):
    """Global alpha-hat and beta of both directions from boundary-complete traces.

    alpha-hat takes the max over the two cross-cell pairings and the per-edge
    pairing; beta is the largest normal-field jump over sqrt of the mean density.
    """
    xm, xp = traces.x_edges()
    ym, yp = traces.y_edges()

    def cross_cell(minus, plus, axis, direction):
        # cell c lies between edge c and edge c + 1 along `axis`
        lo = [slice(None)] * 4
        hi = [slice(None)] * 4
        lo[axis] = slice(None, -1)
        hi[axis] = slice(1, None)
        lo, hi = tuple(lo), tuple(hi)
        inner = pair_viscosity(minus[hi], plus[lo], direction, eos, discriminant)
        outer = pair_viscosity(plus[hi], minus[lo], direction, eos, discriminant)
        edge = pair_viscosity(minus, plus, direction, eos, discriminant)
        return float(max(inner.max(), outer.max(), edge.max()))

    return ViscosityEstimate(
        alpha_hat1=cross_cell(xm, xp, 2, 1),
        alpha_hat2=cross_cell(ym, yp, 1, 2),
        beta1=_jump_bound(xm, xp, 4),
        beta2=_jump_bound(ym, yp, 5),
    )


def edge_flux_quadrature(traces, quad, ctx, eos):
    """One flux per edge, shared by the two cells it separates"""
    w = quad.weights
    xm, xp = traces.x_edges()
    ym, yp = traces.y_edges()
    fx = lax_friedrichs(xm, xp, 1, ctx.alpha1, eos) @ w
    fy = lax_friedrichs(ym, yp, 2, ctx.alpha2, eos) @ w
    return EdgeFluxes(fx, fy)


def _edge_source(minus, plus, component, weights):
    mean = 0.5 * (minus + plus)
    if np.any(~(mean[RHO] > 0.0)):
        raise DomainError("non-positive mean density in the source term")
    jump = plus[component] - minus[component]
    return (0.5 * jump * powell_source_vector(mean)) @ weights


def godunov_powell_source(traces, quad, grid):
    """Per-cell source S_ij, shape (8, ny, nx); jumps are taken high side minus low side"""
    w = quad.weights
    xm, xp = traces.x_edges()
    ym, yp = traces.y_edges()
    tx = _edge_source(xm, xp, 4, w)
    ty = _edge_source(ym, yp, 5, w)
    return (-(tx[:, :, 1:] + tx[:, :, :-1]) / grid.dx
            - (ty[:, 1:] + ty[:, :-1]) / grid.dy)
