"""
Time-step selection and SSP third-order Runge-Kutta stepping
"""
import logging

import numpy as np

from src.diagnostics import conservation_totals
from src.errors import CFLViolation, ConfigError, DomainError, SolverAbort
from src.models import DiagRecord
from src.state import is_admissible

logger = logging.getLogger(__name__)

# u^(s+1) = a u^n + b (u^(s) + dt L(u^(s)))
RK3_STAGES = ((0.0, 1.0), (0.75, 0.25), (1.0 / 3.0, 2.0 / 3.0))
RK3_STAGE_TIMES = (0.0, 1.0, 0.5)


def compute_dt(alpha1, alpha2, grid, quad, nu, convention='pp'):
    """Step size nu * w_hat1 / (alpha1/dx + alpha2/dy); 'classic' drops w_hat1"""
    if not (alpha1 > 0.0 and alpha2 > 0.0):
        raise DomainError(f"viscosity parameters must be positive, got {alpha1}, {alpha2}")
    if not 0.0 < nu < 1.0:
        raise ConfigError(f"CFL factor must lie in (0, 1), got {nu}")
    rate = alpha1 / grid.dx + alpha2 / grid.dy
    if convention == 'pp':
        return nu * quad.w_hat1 / rate
    if convention == 'classic':
        return nu / rate
    raise ConfigError(f"unknown CFL convention '{convention}'")


def ssp_rk3_step(u, dt, rhs, first=None, on_stage=None):
    """One SSP-RK3 step; rhs(u, stage) returns L(u).

    `first` may carry an already evaluated L(u) for the first stage, and
    `on_stage(stage, u_stage)` is called after every stage.
    """
    current = u
    for s, (a, b) in enumerate(RK3_STAGES):
        L = first if (s == 0 and first is not None) else rhs(current, s)
        current = a * u + b * (current + dt * L)
        if on_stage is not None:
            on_stage(s, current)
    return current


class TimeIntegrator:
    """Advances a RunState with a FiniteVolumeScheme"""

    def __init__(self, scheme, max_redos=20):
        self.scheme = scheme
        self.max_redos = max_redos
        self.last_reports = []

    def _pad(self, rhs):
        L = np.zeros((8,) + self.scheme.grid.padded_shape)
        L[self.scheme.grid.interior] = rhs
        return L

    def _check_stage(self, u, s, t):
        cells = u[self.scheme.grid.interior]
        ok = is_admissible(cells)
        if not np.all(ok):
            cell = np.argwhere(~ok)[0]
            raise SolverAbort("inadmissible cell average", stage=f'rk-stage-{s + 1}', t=t, cell=cell)

    def _attempt(self, U, t, dt_cap):
        scheme = self.scheme
        first = scheme.residual(U, t, dt_cap=dt_cap)
        dt = first.context.dt
        reports = [first]

        def rhs(u, s):
            report = scheme.residual(u, t + RK3_STAGE_TIMES[s] * dt, dt=dt)
            reports.append(report)
            return self._pad(report.rhs)

        U_new = ssp_rk3_step(U, dt, rhs, first=self._pad(first.rhs),
                             on_stage=lambda s, u: self._check_stage(u, s, t + dt))
        return U_new, dt, reports

    def step(self, state, t_end):
        """Advance `state` in place by one step not passing t_end; returns its DiagRecord"""
        remaining = t_end - state.t
        dt_cap = remaining
        redos = 0
        while True:
            try:
                U_new, dt, reports = self._attempt(state.cellavg.copy(), state.t, dt_cap)
                break
            except CFLViolation as e:
                redos += 1
                if redos > self.max_redos:
                    raise SolverAbort(f"step redone {redos} times without meeting the CFL bound",
                                      stage='time-step', t=state.t) from e
                dt_cap = 0.5 * e.dt
                logger.debug("t=%.6g %s; redo with dt_cap=%.6e", state.t, e, dt_cap)

        state.t = t_end if dt >= remaining else state.t + dt
        state.step += 1
        state.cellavg = U_new
        state.ctx = reports[0].context
        self.last_reports = reports
        record = DiagRecord(
            t=state.t,
            dt=dt,
            eps_div=max(r.eps_div for r in reports),
            totals=conservation_totals(U_new[self.scheme.grid.interior], self.scheme.grid),
            limiter_hits=sum(r.limiter_hits for r in reports),
            alpha1=state.ctx.alpha1,
            alpha2=state.ctx.alpha2,
            redos=redos + sum(r.halvings for r in reports),
            fallbacks=sum(r.fallbacks for r in reports),
            rescales=sum(r.rescaled for r in reports),
            stage_eps_div=[r.eps_div for r in reports],
        )
        state.stats.append(record)
        return record

    def advance(self, state, t_end, callback=None):
        """Step until t_end; callback(state, record) after every step"""
        while state.t < t_end:
            record = self.step(state, t_end)
            if callback is not None:
                callback(state, record)
        return state
