import json
import logging
import os

import click
import numpy as np

from src.commands import register_commands
from src.config import config


def configure_logging(settings):
    """Attach one stream handler to the package logger"""
    logger = logging.getLogger('src')
    logger.setLevel(settings.LOG_LEVEL.upper())
    if not any(getattr(h, '_mhd_handler', False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler._mhd_handler = True
        logger.addHandler(handler)
    for handler in logger.handlers:
        if getattr(handler, '_mhd_handler', False):
            handler.setFormatter(logging.Formatter(settings.LOG_FORMAT))
    return logger


def create_app(config_name=None):
    """Application factory pattern: returns the configured command group"""
    # Load configuration
    if config_name is None:
        config_name = os.environ.get('MHD_ENV', 'development')

    if config_name not in config:
        config_name = 'default'

    settings = config[config_name]()
    configure_logging(settings)

    @click.group(help='Divergence-free, positivity-preserving finite volume solver for 2D ideal MHD')
    @click.pass_context
    def cli(ctx):
        ctx.obj = settings

    cli.settings = settings
    cli.config_name = config_name

    # Register all commands
    register_commands(cli)

    @cli.command('health')
    def health():
        """Report the active environment and numpy build"""
        click.echo(json.dumps({'status': 'healthy', 'environment': config_name,
                               'numpy': np.__version__}))

    return cli


if __name__ == '__main__':
    create_app()()
