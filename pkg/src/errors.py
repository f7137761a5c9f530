"""
Exception hierarchy and CLI exit codes
"""

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ABORT = 3
EXIT_IO = 4


class MHDError(Exception):
    """Base error for the solver"""

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class DomainError(MHDError, ValueError):
    """State outside the domain of an operation (e.g. non-positive density)"""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class ConfigError(MHDError, ValueError):
    """Invalid run configuration or problem setup"""


class ContractError(MHDError, RuntimeError):
    """API used outside its contract"""


class CFLViolation(MHDError):
    """Fixed step size breaks the positivity CFL bound; the step must be redone"""

    def __init__(self, dt, bound):
        super().__init__(f"dt={dt:.6e} violates CFL bound (dt * sum(alpha/h) = {bound:.6e})")
        self.dt = dt
        self.bound = bound


class SolverAbort(MHDError, RuntimeError):
    """Unrecoverable failure during a run"""

    def __init__(self, reason, stage=None, t=None, cell=None):
        where = []
        if stage:
            where.append(f"stage={stage}")
        if t is not None:
            where.append(f"t={t:.6g}")
        if cell is not None:
            where.append(f"cell={tuple(int(c) for c in cell)}")
        super().__init__(f"{reason} ({', '.join(where)})" if where else reason)
        self.reason = reason
        self.stage = stage
        self.t = t
        self.cell = None if cell is None else tuple(int(c) for c in cell)

    def to_dict(self):
        data = super().to_dict()
        data.update({
            'reason': self.reason,
            'stage': self.stage,
            't': self.t,
            'cell': list(self.cell) if self.cell is not None else None,
        })
        return data


class OutputError(MHDError, OSError):
    """Output file could not be written or read"""
