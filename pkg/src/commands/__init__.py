"""
Centralized command registration
"""
from .check_commands import check_projection, list_problems
from .run_commands import run
from .study_commands import convergence


def register_commands(cli):
    """Register all commands with the command group"""
    cli.add_command(run)
    cli.add_command(convergence)
    cli.add_command(check_projection)
    cli.add_command(list_problems)
