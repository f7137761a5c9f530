import json
from functools import wraps

import click
import numpy as np

from src.errors import (EXIT_ABORT, EXIT_CONFIG, EXIT_IO, CFLViolation, ConfigError, DomainError,
                        OutputError, SolverAbort)


def stage(name):
    """Decorator tagging failures inside a pipeline stage with the stage name"""
    def wrapper(fn):
        @wraps(fn)
        def decorator(*args, **kwargs):
            try:
                with np.errstate(over='raise'):
                    return fn(*args, **kwargs)
            except (SolverAbort, CFLViolation):
                raise
            except (DomainError, FloatingPointError) as e:
                raise SolverAbort(str(e), stage=name, t=kwargs.get('t'),
                                  cell=getattr(e, 'cell', None)) from e
        return decorator
    return wrapper


def exit_codes(fn):
    """Decorator mapping solver errors of a command to its exit code"""
    @wraps(fn)
    def decorator(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as e:
            code = EXIT_CONFIG
            error = e
        except (SolverAbort, DomainError) as e:
            code = EXIT_ABORT
            error = e
        except OutputError as e:
            code = EXIT_IO
            error = e
        click.echo(json.dumps(error.to_dict()), err=True)
        raise click.exceptions.Exit(code)
    return decorator
