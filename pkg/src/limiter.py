"""
Positivity-preserving scaling limiter on inner traces.

Step 1 pulls trace densities toward the cell density, step 2 pulls the full
traces toward the cell average until the internal energy is positive.  Both
steps are affine blends with the cell average, which leaves the discrete
divergence of the traces untouched.
"""
from dataclasses import dataclass

import numpy as np

from src.errors import ContractError, DomainError
from src.models import PiQuantities
from src.state import RHO, internal_energy, is_admissible

EPS_FLOOR = 1e-13
ROUNDOFF = 64.0 * np.finfo(float).eps


@dataclass
class LimiterStats:
    theta_density: np.ndarray
    theta_energy: np.ndarray

    @property
    def hits(self):
        return int(np.count_nonzero(np.minimum(self.theta_density, self.theta_energy) < 1.0))


def compute_pi(traces, cellavg, ctx, quad, interior=None):
    """Edge means of the inner traces and, for k >= 3, the interior state Pi_ij"""
    if interior is None:
        interior = quad.order >= 3
    if interior and quad.order < 3:
        raise ContractError("Pi_ij is undefined for k=2 (1 - 2 w_hat1 = 0)")
    w = quad.weights
    pi = PiQuantities(east=traces.east @ w, west=traces.west @ w,
                      north=traces.north @ w, south=traces.south @ w)
    if interior:
        r1, r2 = ctx.lambda_ratios()
        w1 = quad.w_hat1
        pi.interior = (cellavg - w1 * (r1 * (pi.west + pi.east) + r2 * (pi.south + pi.north))) / (
            1.0 - 2.0 * w1)
    return pi


def _theta(bar, low, eps):
    """min(|(bar - eps)/(bar - low)|, 1), and 1 where bar <= low"""
    denom = bar - low
    active = denom > 0.0
    ratio = np.abs(np.divide(bar - eps, denom, out=np.ones_like(bar), where=active))
    return np.where(active, np.minimum(ratio, 1.0), 1.0)


def _blend(traces, cellavg, theta, components):
    out = traces.copy()
    scale = theta[..., None]
    for name in out.INNER:
        arr = getattr(out, name)
        for c in components:
            bar = cellavg[c][..., None]
            arr[c] = np.where(scale < 1.0, scale * (arr[c] - bar) + bar, arr[c])
    return out


def _check_cells(cellavg):
    ok = is_admissible(cellavg)
    if not np.all(ok):
        cell = tuple(int(c) for c in np.argwhere(~ok)[0])
        raise DomainError("inadmissible cell average entering the limiter", cell=cell)


def limit_density(traces, cellavg, pi, k):
    """Step 1: scale inner-trace densities toward the cell density"""
    _check_cells(cellavg)
    rho_bar = cellavg[RHO]
    rho_min = traces.inner()[RHO].min(axis=-1)
    if k >= 3:
        if pi.interior is None:
            raise ContractError("density limiting at k >= 3 needs Pi_ij")
        rho_min = np.minimum(rho_min, pi.interior[RHO])
    eps1 = np.minimum(EPS_FLOOR, rho_bar)
    theta = _theta(rho_bar, rho_min, eps1)
    return _blend(traces, cellavg, theta, (RHO,)), theta


def limit_energy(traces, cellavg, pi, k):
    """Step 2: scale whole inner traces toward the cell average for positive internal energy"""
    _check_cells(cellavg)
    e_bar = internal_energy(cellavg)
    e_min = internal_energy(traces.inner()).min(axis=-1)
    if k >= 3:
        if pi.interior is None:
            raise ContractError("energy limiting at k >= 3 needs Pi_ij")
        e_min = np.minimum(e_min, internal_energy(pi.interior))
    eps2 = np.minimum(EPS_FLOOR, e_bar)
    theta = _theta(e_bar, e_min, eps2)
    return _blend(traces, cellavg, theta, range(8)), theta


def pp_limit(traces, cellavg, ctx, quad, use_interior=True):
    """Both limiter steps. With use_interior=False the Pi_ij terms are left out."""
    interior = use_interior and quad.order >= 3
    k = quad.order if interior else 2
    pi = compute_pi(traces, cellavg, ctx, quad, interior)
    limited, theta1 = limit_density(traces, cellavg, pi, k)
    pi = compute_pi(limited, cellavg, ctx, quad, interior)
    limited, theta2 = limit_energy(limited, cellavg, pi, k)
    return limited, LimiterStats(theta1, theta2)


def postcondition_violations(traces, cellavg, ctx, quad):
    """Cells whose limited traces (or Pi_ij) fall below the limiter floors, as a bool (ny, nx)"""
    rho_bar = cellavg[RHO]
    e_bar = internal_energy(cellavg)
    B_bar = cellavg[4:7]
    slack = ROUNDOFF * (np.abs(cellavg[7]) + np.sum(B_bar * B_bar, axis=0) + 1.0)
    eps1 = np.minimum(EPS_FLOOR, rho_bar) * (1.0 - 1e-12)
    eps2 = np.minimum(EPS_FLOOR, e_bar) * (1.0 - 1e-12)

    states = [traces.inner()]
    if quad.order >= 3:
        states.append(compute_pi(traces, cellavg, ctx, quad).interior[..., None])
    bad = np.zeros(rho_bar.shape, dtype=bool)
    for S in states:
        rho = S[RHO]
        bad |= np.any(rho < eps1[..., None] - ROUNDOFF * rho_bar[..., None], axis=-1)
        positive = np.where(rho > 0.0, rho, 1.0)
        eint = S[7] - 0.5 * (np.sum(S[1:4] ** 2, axis=0) / positive + np.sum(S[4:7] ** 2, axis=0))
        bad |= np.any((rho <= 0.0) | (eint < eps2[..., None] - slack[..., None]), axis=-1)
    return bad
