"""
Residual operator of the semi-discrete scheme.

One call of `FiniteVolumeScheme.residual` runs the stage pipeline:
ghost fill, reconstruction, divergence-free projection, positivity limiting
(with the viscosity / step-size coupling), edge fluxes and the Powell source.
"""
import logging

import numpy as np

from src.diagnostics import divergence_error
from src.errors import CFLViolation, ConfigError, SolverAbort
from src.flux import edge_flux_quadrature, global_viscosity, godunov_powell_source
from src.grid import apply_trace_boundaries, fill_ghosts
from src.integrator import compute_dt
from src.limiter import postcondition_violations, pp_limit
from src.models import StageReport, StepContext
from src.projection import ddf_project
from src.reconstruct import reconstruct
from src.state import DISCRIMINANTS
from src.utils.decorators import stage

logger = logging.getLogger(__name__)

CFL_CONVENTIONS = ('pp', 'classic')


class FiniteVolumeScheme:
    """Finite volume discretization of the Godunov-Powell MHD system on one grid"""

    def __init__(self, grid, bc, eos, quad, ddf_projection=True, pp_limiter=True,
                 chardecomp=None, discriminant='printed', cfl=0.3, cfl_convention='pp',
                 workers=1, check_postconditions=False):
        if discriminant not in DISCRIMINANTS:
            raise ConfigError(f"unknown discriminant '{discriminant}'")
        if cfl_convention not in CFL_CONVENTIONS:
            raise ConfigError(f"unknown CFL convention '{cfl_convention}'")
        self.grid = grid
        self.bc = bc
        self.eos = eos
        self.quad = quad
        self.ddf_projection = ddf_projection
        self.pp_limiter = pp_limiter
        self.chardecomp = (quad.order == 5) if chardecomp is None else bool(chardecomp)
        self.discriminant = discriminant
        self.cfl = cfl
        self.cfl_convention = cfl_convention
        self.workers = workers
        self.check_postconditions = check_postconditions

    def __repr__(self):
        return (f'<FiniteVolumeScheme k={self.quad.order} {self.grid.nx}x{self.grid.ny} '
                f'ddf={self.ddf_projection} pp={self.pp_limiter}>')

    # ---------------------------------------------------
    # PIPELINE STAGES
    # ---------------------------------------------------
    @stage('fill-ghosts')
    def fill(self, U, t=None):
        return fill_ghosts(U, self.grid, self.bc, t, self.eos)

    @stage('reconstruct')
    def reconstruct(self, U, t=None):
        return reconstruct(U, self.grid, self.quad, self.eos, self.chardecomp, self.workers)

    @stage('ddf-projection')
    def project(self, traces, t=None):
        return ddf_project(traces, self.grid, self.quad)

    @stage('boundary-traces')
    def close(self, traces, t=None):
        return apply_trace_boundaries(traces, self.grid, self.bc, self.quad, t, self.eos)

    @stage('viscosity')
    def viscosity(self, traces, t=None):
        return global_viscosity(traces, self.quad, self.eos, self.discriminant)

    @stage('pp-limiter')
    def limit(self, traces, cells, ctx, use_interior=True, t=None):
        return pp_limit(traces, cells, ctx, self.quad, use_interior)

    @stage('flux')
    def fluxes(self, traces, ctx, t=None):
        return edge_flux_quadrature(traces, self.quad, ctx, self.eos)

    @stage('source')
    def source(self, traces, t=None):
        return godunov_powell_source(traces, self.quad, self.grid)

    # ---------------------------------------------------
    # STEP SIZE
    # ---------------------------------------------------
    def context(self, estimate, dt=None, dt_cap=None):
        """Stage context for the given viscosity estimate.

        With dt given the CFL bound is only checked; otherwise dt is chosen,
        capped by dt_cap, and halved until the strict bound holds.
        Returns (ctx, halvings).
        """
        grid, w1 = self.grid, self.quad.w_hat1
        rate = estimate.alpha1 / grid.dx + estimate.alpha2 / grid.dy
        if dt is not None:
            if dt * rate >= w1:
                raise CFLViolation(dt, dt * rate)
            return StepContext(dt, estimate.alpha1, estimate.alpha2, grid.dx, grid.dy), 0

        dt = compute_dt(estimate.alpha1, estimate.alpha2, grid, self.quad, self.cfl,
                        self.cfl_convention)
        if dt_cap is not None:
            dt = min(dt, dt_cap)
        halvings = 0
        while dt * rate >= w1:
            dt *= 0.5
            halvings += 1
        return StepContext(dt, estimate.alpha1, estimate.alpha2, grid.dx, grid.dy), halvings

    # ---------------------------------------------------
    # RESIDUAL
    # ---------------------------------------------------
    def residual(self, U, t, dt=None, dt_cap=None):
        """Residual of the padded cell averages U (ghosts are refilled in place)"""
        self.fill(U, t=t)
        cells = U[self.grid.interior]
        traces = self.reconstruct(U, t=t)
        fallbacks = traces.fallbacks
        if self.ddf_projection:
            traces = self.project(traces, t=t)

        hits, rescaled = 0, False
        if self.pp_limiter:
            # provisional viscosity from traces limited without Pi_ij, always admissible
            provisional, _ = self.limit(traces, cells, None, use_interior=False, t=t)
            estimate = self.viscosity(self.close(provisional, t=t), t=t)
            ctx, halvings = self.context(estimate, dt, dt_cap)

            traces, stats = self.limit(traces, cells, ctx, t=t)
            self.close(traces, t=t)
            hits = stats.hits
            realized = self.viscosity(traces, t=t)
            factor = max(realized.alpha1 / estimate.alpha1, realized.alpha2 / estimate.alpha2)
            if factor > 1.0:
                # Pi_ij only sees lambda1/lambda, so a common rescale keeps the limited traces valid
                rescaled = True
                ctx, more = self.context(estimate.scaled(factor), dt, dt_cap)
                halvings += more
                logger.debug("t=%.6g viscosity rescaled by %.6f", t, factor)
            if self.check_postconditions:
                self._assert_limited(traces, cells, ctx, t)
        else:
            self.close(traces, t=t)
            ctx, halvings = self.context(self.viscosity(traces, t=t), dt, dt_cap)

        fluxes = self.fluxes(traces, ctx, t=t)
        source = self.source(traces, t=t)
        flux_divergence = fluxes.divergence(self.grid)
        eps_div = divergence_error(traces, self.grid, self.quad)
        return StageReport(
            rhs=flux_divergence + source,
            flux_divergence=flux_divergence,
            source=source,
            traces=traces,
            context=ctx,
            eps_div=eps_div,
            limiter_hits=hits,
            fallbacks=fallbacks,
            rescaled=rescaled,
            halvings=halvings,
            fluxes=fluxes,
        )

    def _assert_limited(self, traces, cells, ctx, t):
        bad = postcondition_violations(traces, cells, ctx, self.quad)
        if np.any(bad):
            cell = np.argwhere(bad)[0]
            raise SolverAbort("limiter postcondition violated", stage='pp-limiter', t=t, cell=cell)
