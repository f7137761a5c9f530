"""
Run orchestration: scheme assembly, the time loop with its outputs, convergence studies
"""
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from src.config import Config
from src.diagnostics import (RunLog, l1_error_and_order, l1_errors, save_traces,
                             write_error_table, write_outputs)
from src.errors import ConfigError, OutputError, SolverAbort
from src.grid import edge_quadrature, make_grid
from src.integrator import TimeIntegrator
from src.models import RunState
from src.problems import exact_cell_averages, get_problem, init_cell_averages
from src.scheme import FiniteVolumeScheme
from src.state import IdealEos

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    run_config: object
    state: RunState
    scheme: FiniteVolumeScheme
    outputs: list = field(default_factory=list)
    errors: dict = None


def build_scheme(run_config, settings=Config):
    """Problem preset and scheme for a resolved RunConfig"""
    spec = get_problem(run_config.problem)
    grid = make_grid(run_config.nx, run_config.ny, spec.bounds, run_config.order)
    scheme = FiniteVolumeScheme(
        grid, spec.bc, IdealEos(spec.gamma), edge_quadrature(run_config.order),
        ddf_projection=run_config.ddf_projection,
        pp_limiter=run_config.pp_limiter,
        chardecomp=run_config.chardecomp,
        discriminant=run_config.discriminant,
        cfl=run_config.cfl,
        cfl_convention=run_config.cfl_convention,
        workers=run_config.threads,
        check_postconditions=settings.ASSERT_POSTCONDITIONS,
    )
    return spec, scheme


def initial_state(spec, scheme):
    return RunState(t=0.0, step=0, cellavg=init_cell_averages(spec, scheme.grid, scheme.eos))


def _targets(spec, t_end):
    return sorted(t for t in spec.snapshots if 0.0 < t < t_end) + [t_end]


def _mkdir(path):
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputError(f"cannot create output directory {path}: {e}") from e


def _progress(state, record):
    return (f"step={state.step} t={record.t:.6g} dt={record.dt:.3e} "
            f"eps_div={record.eps_div:.2e} hits={record.limiter_hits} fallbacks={record.fallbacks}")


def _write_abort_report(out, error, state):
    report = error.to_dict()
    report['step'] = state.step
    try:
        (out / 'abort_report.json').write_text(json.dumps(report, indent=2))
    except OSError as e:
        logger.error("could not write abort report: %s", e)


def _snapshot(scheme, state, stem, run_config):
    """Write state to stem.*; traces are rebuilt from the state so eps_div_cell matches it"""
    traces = scheme.residual(state.cellavg.copy(), state.t).traces
    return write_outputs(state, scheme.grid, scheme.eos, stem, run_config.output_format,
                         traces, scheme.quad, run_config.log_rho)


def run(run_config, settings=Config):
    """
    Advance a problem to its end time, writing outputs as configured

    Writes into run_config.output_path: run_config.env, run_log.csv, the
    snapshots, final.* and, when the problem has an exact solution, errors.csv.
    A SolverAbort leaves abort_report.json and propagates.
    """
    if run_config.output_path is None:
        run_config = replace(run_config, output_path=settings.OUTPUT_DIR)
    run_config = run_config.validate().resolved()
    out = Path(run_config.output_path)
    _mkdir(out)
    run_config.to_env(out / 'run_config.env')

    spec, scheme = build_scheme(run_config, settings)
    integrator = TimeIntegrator(scheme, max_redos=settings.MAX_STEP_REDOS)
    state = initial_state(spec, scheme)
    log = RunLog(out / 'run_log.csv')
    result = RunResult(run_config, state, scheme, outputs=[log.path])
    logger.info("run problem=%s k=%d grid=%dx%d t_end=%g ddf=%s pp=%s",
                run_config.problem, run_config.order, run_config.nx, run_config.ny,
                run_config.t_end, run_config.ddf_projection, run_config.pp_limiter)

    def on_step(state, record):
        log.append(record)
        if run_config.every and state.step % run_config.every == 0:
            logger.info(_progress(state, record))
            result.outputs += _snapshot(scheme, state, out / f'step_{state.step:06d}', run_config)
            if run_config.dump_traces:
                for s, report in enumerate(integrator.last_reports):
                    path = out / f'traces_{state.step:06d}_stage{s + 1}.npz'
                    result.outputs.append(save_traces(path, report.traces))
        else:
            logger.debug(_progress(state, record))

    try:
        for target in _targets(spec, run_config.t_end):
            integrator.advance(state, target, callback=on_step)
            if target < run_config.t_end:
                result.outputs += _snapshot(scheme, state, out / f'snapshot_t{target:g}', run_config)
    except SolverAbort as e:
        logger.error("run aborted at step=%d: %s", state.step, e)
        _write_abort_report(out, e, state)
        raise

    result.outputs += _snapshot(scheme, state, out / 'final', run_config)
    if spec.exact is not None:
        exact = exact_cell_averages(spec, scheme.grid, scheme.eos, state.t)
        result.errors = l1_errors(state.cellavg[scheme.grid.interior], exact, scheme.grid, scheme.eos)
        means = l1_errors(state.cellavg[scheme.grid.interior], exact, scheme.grid, scheme.eos,
                          mean=True)
        row = {'nx': scheme.grid.nx, 'ny': scheme.grid.ny, 'errors': result.errors,
               'means': means, 'orders': None}
        result.outputs.append(write_error_table([row], out / 'errors.csv'))
    logger.info("run finished steps=%d t=%g", state.step, state.t)
    return result


def simulate(run_config, settings=Config):
    """Advance a resolved RunConfig without writing files; returns (spec, scheme, state)"""
    spec, scheme = build_scheme(run_config, settings)
    state = initial_state(spec, scheme)
    TimeIntegrator(scheme, max_redos=settings.MAX_STEP_REDOS).advance(state, run_config.t_end)
    return spec, scheme, state


def convergence_study(run_config, resolutions, settings=Config):
    """Run each resolution and write the l1 error / order table to convergence.csv"""
    run_config = run_config.validate()
    spec = get_problem(run_config.problem)
    if spec.exact is None:
        raise ConfigError(f"problem '{spec.name}' has no exact solution to measure errors against")
    if len(resolutions) < 2:
        raise ConfigError("a convergence study needs at least two resolutions")
    ordered = sorted(int(n) for n in resolutions)
    if any(fine != 2 * coarse for coarse, fine in zip(ordered, ordered[1:])):
        raise ConfigError(f"resolutions must be nested by a factor of 2, got {ordered}")

    results = []
    eos = None
    for n in ordered:
        cfg = replace(run_config, nx=int(n), ny=None).resolved()
        _, scheme, state = simulate(cfg, settings)
        eos = scheme.eos
        exact = exact_cell_averages(spec, scheme.grid, eos, state.t)
        results.append((scheme.grid, state.cellavg[scheme.grid.interior], exact))
        logger.info("convergence nx=%d ny=%d steps=%d", cfg.nx, cfg.ny, state.step)

    rows = l1_error_and_order(results, eos)
    out = Path(run_config.output_path or settings.OUTPUT_DIR)
    _mkdir(out)
    return rows, write_error_table(rows, out / 'convergence.csv')
