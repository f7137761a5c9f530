import os
import tempfile
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from dotenv import dotenv_values

from src.errors import ConfigError, OutputError
from src.grid import SUPPORTED_ORDERS
from src.problems import builtin_problems, get_problem

basedir = Path(__file__).resolve().parent.parent

# Only load .env if not in testing mode
if os.environ.get('MHD_ENV') != 'testing' and os.environ.get('TESTING') != 'true':
    from dotenv import load_dotenv
    load_dotenv()


def _flag(name, default):
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


class Config:
    """Base configuration"""
    LOG_LEVEL = os.environ.get('MHD_LOG_LEVEL', 'WARNING')
    LOG_FORMAT = os.environ.get('MHD_LOG_FORMAT', '%(asctime)s %(levelname)s %(name)s: %(message)s')

    OUTPUT_DIR = os.environ.get('MHD_OUTPUT_DIR', str(basedir / 'output'))
    THREADS = int(os.environ.get('MHD_THREADS', 1))

    # Solver safety nets
    ASSERT_POSTCONDITIONS = _flag('MHD_ASSERT_POSTCONDITIONS', False)
    MAX_STEP_REDOS = int(os.environ.get('MHD_MAX_STEP_REDOS', 20))

    def to_dict(self):
        return {name: getattr(self, name) for name in dir(self) if name.isupper()}


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    TESTING = False
    LOG_LEVEL = os.environ.get('MHD_LOG_LEVEL', 'DEBUG')
    ASSERT_POSTCONDITIONS = _flag('MHD_ASSERT_POSTCONDITIONS', True)


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    DEBUG = True
    LOG_LEVEL = 'WARNING'
    OUTPUT_DIR = os.path.join(tempfile.gettempdir(), 'mhd-tests')
    THREADS = 1
    ASSERT_POSTCONDITIONS = True


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    TESTING = False
    LOG_LEVEL = os.environ.get('MHD_LOG_LEVEL', 'INFO')
    ASSERT_POSTCONDITIONS = _flag('MHD_ASSERT_POSTCONDITIONS', False)


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}


# ==================== RUN CONFIGURATION ====================

def _parse_bool(value):
    text = str(value).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    if text in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _parse_optional_bool(value):
    if str(value).strip().lower() in ('', 'auto', 'none'):
        return None
    return _parse_bool(value)


def _format_value(value):
    if value is None:
        return 'auto'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


# file key -> (RunConfig field, parser)
FILE_KEYS = {
    'RUN_PROBLEM': ('problem', str),
    'RUN_NX': ('nx', int),
    'RUN_NY': ('ny', int),
    'RUN_T_END': ('t_end', float),
    'SCHEME_ORDER': ('order', int),
    'SCHEME_CFL': ('cfl', float),
    'SCHEME_CFL_CONVENTION': ('cfl_convention', str),
    'SCHEME_DDF_PROJECTION': ('ddf_projection', _parse_bool),
    'SCHEME_PP_LIMITER': ('pp_limiter', _parse_bool),
    'SCHEME_CHARDECOMP': ('chardecomp', _parse_optional_bool),
    'SCHEME_DISCRIMINANT': ('discriminant', str),
    'OUTPUT_FORMAT': ('output_format', str),
    'OUTPUT_PATH': ('output_path', str),
    'OUTPUT_EVERY': ('every', int),
    'OUTPUT_LOG_RHO': ('log_rho', _parse_bool),
    'OUTPUT_DUMP_TRACES': ('dump_traces', _parse_bool),
    'RUNTIME_THREADS': ('threads', int),
}


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one run"""
    problem: str = 'vortex'
    order: int = 5
    nx: Optional[int] = None
    ny: Optional[int] = None
    t_end: Optional[float] = None
    cfl: float = 0.3
    cfl_convention: str = 'pp'
    ddf_projection: bool = True
    pp_limiter: bool = True
    chardecomp: Optional[bool] = None
    discriminant: str = 'printed'
    output_format: str = 'csv'
    output_path: Optional[str] = None
    every: int = 0
    threads: int = 1
    log_rho: bool = False
    dump_traces: bool = False

    @classmethod
    def from_file(cls, path, defaults=None, **overrides):
        """Load a key=value run file over `defaults`; non-None overrides win over file keys"""
        if not Path(path).is_file():
            raise ConfigError(f"config file not found: {path}")
        values = {}
        problems = []
        for key, raw in dotenv_values(path).items():
            if key not in FILE_KEYS:
                problems.append(f"unknown key {key}")
                continue
            name, parser = FILE_KEYS[key]
            try:
                values[name] = parser(raw)
            except (TypeError, ValueError):
                problems.append(f"invalid value for {key}: {raw!r}")
        if problems:
            raise ConfigError(f"{path}: " + '; '.join(problems))
        return cls(**{**(defaults or {}), **values}).merged(**overrides)

    def merged(self, **overrides):
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(f"unknown run settings: {', '.join(sorted(unknown))}")
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def validate(self):
        """Raise a single ConfigError listing every problem"""
        names = [p.name for p in builtin_problems()]
        problems = []
        if self.problem not in names:
            problems.append(f"unknown problem '{self.problem}' (choose from {', '.join(names)})")
        if self.order not in SUPPORTED_ORDERS:
            problems.append(f"order must be one of {SUPPORTED_ORDERS}, got {self.order}")
        for name in ('nx', 'ny'):
            value = getattr(self, name)
            if value is not None and value < 1:
                problems.append(f"{name} must be at least 1, got {value}")
        if self.t_end is not None and not self.t_end > 0.0:
            problems.append(f"t_end must be positive, got {self.t_end}")
        if not 0.0 < self.cfl < 1.0:
            problems.append(f"cfl must lie in (0, 1), got {self.cfl}")
        if self.cfl_convention not in ('pp', 'classic'):
            problems.append(f"unknown cfl convention '{self.cfl_convention}'")
        if self.discriminant not in ('printed', 'standard'):
            problems.append(f"unknown discriminant '{self.discriminant}'")
        if self.output_format not in ('csv', 'vtk', 'both'):
            problems.append(f"unknown output format '{self.output_format}'")
        if self.every < 0:
            problems.append(f"every must be non-negative, got {self.every}")
        if self.threads < 1:
            problems.append(f"threads must be at least 1, got {self.threads}")
        if problems:
            raise ConfigError('; '.join(problems))
        return self

    def resolved(self):
        """Copy with resolution and end time filled in from the problem preset"""
        spec = get_problem(self.problem)
        nx0, ny0 = spec.resolution
        nx, ny = self.nx, self.ny
        if nx is None and ny is None:
            nx, ny = nx0, ny0
        elif ny is None:
            ny = max(1, round(nx * ny0 / nx0))
        elif nx is None:
            nx = max(1, round(ny * nx0 / ny0))
        t_end = spec.t_end if self.t_end is None else self.t_end
        return replace(self, nx=nx, ny=ny, t_end=t_end)

    def to_env(self, path):
        """Write the run file that reproduces this configuration"""
        lines = [f"{key}={_format_value(getattr(self, name))}"
                 for key, (name, _) in FILE_KEYS.items()
                 if getattr(self, name) is not None or name == 'chardecomp']
        try:
            Path(path).write_text('\n'.join(lines) + '\n')
        except OSError as e:
            raise OutputError(f"cannot write {path}: {e}") from e
        return Path(path)

    def to_dict(self):
        return asdict(self)
