import math

import click

from src.commands.options import build_run_config, scheme_options
from src.diagnostics import PRIMITIVE_NAMES
from src.errors import ConfigError
from src.runner import convergence_study
from src.utils.decorators import exit_codes


def _parse_resolutions(text):
    try:
        return [int(n) for n in text.split(',') if n.strip()]
    except ValueError as e:
        raise ConfigError(f"resolutions must be comma separated integers, got '{text}'") from e


def _fmt(value):
    return '-' if value is None or math.isnan(value) else f'{value:.2f}'


@click.command('convergence')
@scheme_options
@click.option('--resolutions', default='20,40,80', show_default=True,
              help='Comma separated cell counts along x, nested by a factor of 2')
@click.pass_obj
@exit_codes
def convergence(settings, resolutions, **options):
    """Measure l1 errors and convergence orders against the exact solution"""
    if options.get('problem') is None and options.get('config_file') is None:
        options['problem'] = 'vortex'
    run_config = build_run_config(settings, **options)
    rows, path = convergence_study(run_config, _parse_resolutions(resolutions), settings)
    for row in rows:
        orders = row['orders'] or {}
        cells = '  '.join(f"{q}={row['errors'][q]:.3e}({_fmt(orders.get(q))})"
                          for q in PRIMITIVE_NAMES)
        click.echo(f"{row['nx']}x{row['ny']}  {cells}")
    click.echo(f"table written to {path}")
