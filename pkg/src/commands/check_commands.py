import json

import click

from src.problems import builtin_problems
from src.projection import projection_matrix_check

DEFAULT_RATIOS = '0.1,0.25,0.5,0.8,1,1.25,2,3,4,10'


@click.command('check-projection')
@click.option('--ratios', default=DEFAULT_RATIOS, show_default=True,
              help='Comma separated aspect ratios dx/dy')
@click.option('--tol', type=float, default=1e-14, show_default=True)
def check_projection(ratios, tol):
    """Check that the projection matrix is idempotent for several aspect ratios"""
    failed = []
    for text in ratios.split(','):
        ratio = float(text)
        ok = projection_matrix_check(dx=ratio, dy=1.0, tol=tol)
        click.echo(f"dx/dy={ratio:g}: {'ok' if ok else 'FAILED'}")
        if not ok:
            failed.append(ratio)
    if failed:
        raise click.exceptions.Exit(1)


@click.command('problems')
def list_problems():
    """List the benchmark presets"""
    click.echo(json.dumps([p.to_dict() for p in builtin_problems()], indent=2))
