"""
Options shared by the run and convergence commands
"""
import click

from src.config import RunConfig


def scheme_options(fn):
    """Problem and scheme switches common to every solver command"""
    options = [
        click.option('--problem', type=str, default=None, help='Benchmark problem name'),
        click.option('--order', type=click.Choice(['2', '5']), default=None,
                     help='Reconstruction order k'),
        click.option('--tend', 't_end', type=float, default=None, help='Final time'),
        click.option('--cfl', type=float, default=None, help='CFL factor in (0, 1)'),
        click.option('--cfl-convention', type=click.Choice(['pp', 'classic']), default=None,
                     help="'pp' scales the step by the Gauss-Lobatto weight"),
        click.option('--discriminant', type=click.Choice(['printed', 'standard']), default=None,
                     help='Fast-speed bound variant'),
        click.option('--no-ddf', is_flag=True, help='Disable the divergence-free projection'),
        click.option('--no-pp', is_flag=True, help='Disable the positivity limiter'),
        click.option('--no-chardecomp', is_flag=True,
                     help='Reconstruct component-wise instead of in characteristic fields'),
        click.option('--out', 'output_path', type=click.Path(file_okay=False), default=None,
                     help='Output directory'),
        click.option('--threads', type=int, default=None, help='Worker threads'),
        click.option('--config', 'config_file', type=click.Path(dir_okay=False), default=None,
                     help='Run file with RUN_/SCHEME_/OUTPUT_/RUNTIME_ keys'),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def build_run_config(settings, config_file=None, order=None, no_ddf=False, no_pp=False,
                     no_chardecomp=False, **overrides):
    """RunConfig from settings defaults, an optional run file and command-line flags"""
    overrides['order'] = None if order is None else int(order)
    overrides['ddf_projection'] = False if no_ddf else None
    overrides['pp_limiter'] = False if no_pp else None
    overrides['chardecomp'] = False if no_chardecomp else None
    defaults = {'threads': settings.THREADS}
    if config_file is not None:
        return RunConfig.from_file(config_file, defaults=defaults, **overrides)
    return RunConfig(**defaults).merged(**overrides)
