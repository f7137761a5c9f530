"""
Divergence error, error norms, conservation ledger and file output
"""
import logging
import math
from pathlib import Path

import numpy as np

from src.errors import ConfigError, OutputError
from src.models import DiagRecord, InterfaceSet
from src.projection import discrete_divergence
from src.state import MAG, MOM, RHO, pressure, primitive_from_conserved

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('x', 'y', 'rho', 'm1', 'm2', 'm3', 'B1', 'B2', 'B3', 'E', 'p', 'eps_div_cell')
PRIMITIVE_NAMES = ('rho', 'v1', 'v2', 'v3', 'B1', 'B2', 'B3', 'p')
OUTPUT_FORMATS = ('csv', 'vtk', 'both')
FLOAT_FORMAT = '%.17g'


# ---------------------------------------------------
# DIVERGENCE ERROR
# ---------------------------------------------------
def divergence_error(traces, grid, quad):
    """Max over cells of the absolute discrete divergence"""
    return float(np.max(np.abs(discrete_divergence(traces, grid, quad))))


# ---------------------------------------------------
# ERROR NORMS
# ---------------------------------------------------
def l1_errors(numeric, exact, grid, eos, mean=False):
    """Integral l1 error of each primitive quantity; both inputs are interior cell averages.

    With mean=True the integral is divided by the domain area, i.e. the cell-mean error.
    """
    diff = np.abs(primitive_from_conserved(numeric, eos) - primitive_from_conserved(exact, eos))
    sums = diff.reshape(8, -1).sum(axis=1) * grid.area
    if mean:
        sums /= grid.area * grid.nx * grid.ny
    return dict(zip(PRIMITIVE_NAMES, (float(s) for s in sums)))


def _order(coarse, fine):
    if coarse <= 0.0 or fine <= 0.0:
        return math.nan
    return math.log2(coarse / fine)


def l1_error_and_order(results, eos):
    """
    Error table over a sequence of nested resolutions

    Args:
        results: list of (grid, numeric, exact) with interior cell averages
        eos: equation of state used to recover primitives

    Returns:
        list of rows {'nx', 'ny', 'errors', 'means', 'orders'}; the first row has no orders
    """
    if len(results) < 2:
        raise ConfigError("a convergence table needs at least two resolutions")
    results = sorted(results, key=lambda r: r[0].nx)
    for (coarse, _, _), (fine, _, _) in zip(results, results[1:]):
        if fine.nx != 2 * coarse.nx or fine.ny != 2 * coarse.ny:
            raise ConfigError(f"resolutions must be nested by a factor of 2, got "
                              f"{coarse.nx}x{coarse.ny} then {fine.nx}x{fine.ny}")

    rows = []
    previous = None
    for grid, numeric, exact in results:
        errors = l1_errors(numeric, exact, grid, eos)
        orders = None
        if previous is not None:
            orders = {q: _order(previous[q], errors[q]) for q in PRIMITIVE_NAMES}
        rows.append({'nx': grid.nx, 'ny': grid.ny, 'errors': errors,
                     'means': l1_errors(numeric, exact, grid, eos, mean=True), 'orders': orders})
        previous = errors
    return rows


def write_error_table(rows, path):
    """CSV with nx, ny, an (l1, order) column pair per primitive quantity, then the mean errors"""
    header = ['nx', 'ny']
    for q in PRIMITIVE_NAMES:
        header += [f'{q}_l1', f'{q}_order']
    header += [f'{q}_l1_mean' for q in PRIMITIVE_NAMES]
    data = []
    for row in rows:
        line = [row['nx'], row['ny']]
        for q in PRIMITIVE_NAMES:
            order = math.nan if row['orders'] is None else row['orders'][q]
            line += [row['errors'][q], order]
        means = row.get('means') or {}
        line += [means.get(q, math.nan) for q in PRIMITIVE_NAMES]
        data.append(line)
    fmt = ['%d', '%d'] + [FLOAT_FORMAT] * (len(header) - 2)
    try:
        np.savetxt(path, np.array(data, dtype=float), fmt=fmt, delimiter=',',
                   header=','.join(header), comments='')
    except OSError as e:
        raise OutputError(f"cannot write error table {path}: {e}") from e
    return Path(path)


# ---------------------------------------------------
# CONSERVATION LEDGER
# ---------------------------------------------------
def conservation_totals(cells, grid):
    """Integrals of the conserved components over the interior"""
    sums = cells.reshape(8, -1).sum(axis=1) * grid.area
    return {'mass': float(sums[0]), 'momx': float(sums[1]), 'momy': float(sums[2]),
            'momz': float(sums[3]), 'energy': float(sums[7])}


def boundary_flux_integral(fluxes, grid):
    """Net outflow rate of each conserved component through the domain boundary"""
    out_x = (fluxes.fx[:, :, -1] - fluxes.fx[:, :, 0]).sum(axis=1) * grid.dy
    out_y = (fluxes.fy[:, -1] - fluxes.fy[:, 0]).sum(axis=1) * grid.dx
    return out_x + out_y


def ledger_residual(report, grid):
    """Flux part of the residual integrated over the domain plus the boundary outflow.

    Interior edge fluxes telescope, so this is zero up to round-off.
    """
    if report.fluxes is None:
        raise ConfigError("stage report carries no edge fluxes")
    total = report.flux_divergence.reshape(8, -1).sum(axis=1) * grid.area
    return total + boundary_flux_integral(report.fluxes, grid)


# ---------------------------------------------------
# CELL TABLES
# ---------------------------------------------------
def _interior(cells, grid):
    if cells.shape[1:] == grid.padded_shape:
        return cells[grid.interior]
    return cells


def _cell_divergence(traces, grid, quad):
    if traces is None or quad is None:
        return np.zeros(grid.shape)
    return discrete_divergence(traces, grid, quad)


def cell_table(cells, grid, eos, traces=None, quad=None, log_rho=False):
    """(columns, data) with one row per cell, rows ordered by j then i"""
    cells = _interior(cells, grid)
    X, Y = grid.cell_centers()
    columns = list(CSV_COLUMNS)
    parts = [X, Y] + [cells[c] for c in range(8)] + [
        pressure(cells, eos),
        np.abs(_cell_divergence(traces, grid, quad)),
    ]
    if log_rho:
        columns.append('log_rho')
        parts.append(np.log10(cells[RHO]))
    data = np.stack([np.asarray(p).ravel() for p in parts], axis=1)
    return columns, data


def write_csv(path, cells, grid, eos, traces=None, quad=None, log_rho=False):
    columns, data = cell_table(cells, grid, eos, traces, quad, log_rho)
    try:
        np.savetxt(path, data, fmt=FLOAT_FORMAT, delimiter=',', header=','.join(columns),
                   comments='')
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    return Path(path)


def read_csv(path):
    """Return (columns, data) of a cell table"""
    try:
        with open(path) as fh:
            columns = fh.readline().strip().split(',')
        data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    except OSError as e:
        raise OutputError(f"cannot read {path}: {e}") from e
    return columns, data


def cells_from_csv(path, grid):
    """Interior cell averages (8, ny, nx) stored in a cell table"""
    columns, data = read_csv(path)
    if len(data) != grid.nx * grid.ny:
        raise ConfigError(f"{path} has {len(data)} rows, expected {grid.nx * grid.ny}")
    start = columns.index('rho')
    return np.ascontiguousarray(data[:, start:start + 8].T.reshape((8,) + grid.shape))


# ---------------------------------------------------
# VTK
# ---------------------------------------------------
def derived_fields(cells, grid, eos, traces=None, quad=None):
    """Scalar fields added to VTK snapshots"""
    cells = _interior(cells, grid)
    rho = cells[RHO]
    p = pressure(cells, eos)
    v = cells[MOM] / rho
    B = cells[MAG]
    speed = np.sqrt(np.sum(v * v, axis=0))
    return {
        'pressure': p,
        'magnetic_pressure': 0.5 * np.sum(B * B, axis=0),
        'mach': speed / np.sqrt(eos.sound_speed_squared(rho, p)),
        'log10_rho': np.log10(rho),
        'divergence': _cell_divergence(traces, grid, quad),
    }


def write_vtk(path, cells, grid, eos, traces=None, quad=None):
    """Legacy ASCII STRUCTURED_POINTS file with the fields stored as CELL_DATA"""
    import vtk
    from vtk.util import numpy_support

    path = Path(path)
    if not path.parent.is_dir():
        raise OutputError(f"cannot write {path}: directory does not exist")
    cells = _interior(cells, grid)

    def as_vtk(values, name):
        array = numpy_support.numpy_to_vtk(np.ascontiguousarray(values, dtype=float), deep=True)
        array.SetName(name)
        return array

    image = vtk.vtkStructuredPoints()
    image.SetDimensions(grid.nx + 1, grid.ny + 1, 1)
    image.SetOrigin(grid.x_lo, grid.y_lo, 0.0)
    image.SetSpacing(grid.dx, grid.dy, 1.0)

    data = image.GetCellData()
    data.SetScalars(as_vtk(cells[RHO].ravel(), 'rho'))
    data.SetVectors(as_vtk(cells[MOM].reshape(3, -1).T, 'momentum'))
    data.AddArray(as_vtk(cells[MAG].reshape(3, -1).T, 'magnetic_field'))
    data.AddArray(as_vtk(cells[7].ravel(), 'energy'))
    for name, values in derived_fields(cells, grid, eos, traces, quad).items():
        data.AddArray(as_vtk(values.ravel(), name))

    writer = vtk.vtkStructuredPointsWriter()
    writer.SetFileName(str(path))
    writer.SetFileTypeToASCII()
    writer.SetInputData(image)
    if writer.Write() != 1 or writer.GetErrorCode() != 0:
        raise OutputError(f"cannot write {path}")
    return path


def write_outputs(state, grid, eos, path, fmt='csv', traces=None, quad=None, log_rho=False):
    """Write a snapshot of `state` to path.csv and/or path.vtk; returns the written paths"""
    if fmt not in OUTPUT_FORMATS:
        raise ConfigError(f"unknown output format '{fmt}'")
    stem = Path(path)
    written = []
    if fmt in ('csv', 'both'):
        written.append(write_csv(stem.with_suffix('.csv'), state.cellavg, grid, eos,
                                 traces, quad, log_rho))
    if fmt in ('vtk', 'both'):
        written.append(write_vtk(stem.with_suffix('.vtk'), state.cellavg, grid, eos,
                                 traces, quad))
    logger.debug("snapshot t=%.6g written to %s", state.t, ', '.join(map(str, written)))
    return written


# ---------------------------------------------------
# RUN LOG
# ---------------------------------------------------
class RunLog:
    """Per-step CSV log, one DiagRecord per row"""

    ROW_FORMAT = [FLOAT_FORMAT] * 7 + ['%d'] * 3 + [FLOAT_FORMAT] * 3

    def __init__(self, path):
        self.path = Path(path)
        try:
            with open(self.path, 'w') as fh:
                fh.write(','.join(DiagRecord.LOG_COLUMNS) + '\n')
        except OSError as e:
            raise OutputError(f"cannot create run log {self.path}: {e}") from e

    def __repr__(self):
        return f'<RunLog {self.path}>'

    def append(self, record):
        try:
            with open(self.path, 'a') as fh:
                np.savetxt(fh, [record.to_row()], fmt=self.ROW_FORMAT, delimiter=',')
        except OSError as e:
            raise OutputError(f"cannot append to run log {self.path}: {e}") from e


def read_run_log(path):
    """Run log as a numpy structured array with one field per column"""
    try:
        return np.atleast_1d(np.genfromtxt(path, delimiter=',', names=True))
    except OSError as e:
        raise OutputError(f"cannot read run log {path}: {e}") from e


# ---------------------------------------------------
# TRACE DUMPS
# ---------------------------------------------------
def save_traces(path, traces):
    arrays = {name: getattr(traces, name) for name in InterfaceSet.INNER + InterfaceSet.OUTER
              if getattr(traces, name) is not None}
    try:
        np.savez_compressed(path, fallbacks=np.array(traces.fallbacks), **arrays)
    except OSError as e:
        raise OutputError(f"cannot write trace dump {path}: {e}") from e
    return Path(path)


def load_traces(path):
    try:
        with np.load(path) as dump:
            kwargs = {name: dump[name] if name in dump.files else None
                      for name in InterfaceSet.INNER + InterfaceSet.OUTER}
            fallbacks = int(dump['fallbacks'])
    except OSError as e:
        raise OutputError(f"cannot read trace dump {path}: {e}") from e
    return InterfaceSet(fallbacks=fallbacks, **kwargs)
