import json

import click

from src.commands.options import build_run_config, scheme_options
from src.runner import run as run_problem
from src.utils.decorators import exit_codes


@click.command('run')
@scheme_options
@click.option('--nx', type=int, default=None, help='Cells along x')
@click.option('--ny', type=int, default=None, help='Cells along y')
@click.option('--format', 'output_format', type=click.Choice(['csv', 'vtk', 'both']),
              default=None, help='Snapshot file format')
@click.option('--every', type=int, default=None, help='Write a snapshot every N steps (0: final only)')
@click.option('--log-rho', is_flag=True, help='Append a log10 density column to CSV output')
@click.option('--dump-traces', is_flag=True,
              help='Save the stage traces at every snapshot step')
@click.pass_obj
@exit_codes
def run(settings, **options):
    """Advance a benchmark problem to its final time"""
    options['log_rho'] = options['log_rho'] or None
    options['dump_traces'] = options['dump_traces'] or None
    run_config = build_run_config(settings, **options)
    result = run_problem(run_config, settings)
    summary = {
        'problem': result.run_config.problem,
        'steps': result.state.step,
        't': result.state.t,
        'output_path': result.run_config.output_path,
    }
    if result.errors is not None:
        summary['l1_errors'] = result.errors
    click.echo(json.dumps(summary, indent=2))
