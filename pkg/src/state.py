"""
Conserved/primitive MHD state algebra, equation of state and wave-speed bounds.

States are numpy arrays with the 8 components on the first axis:
conserved (rho, m1, m2, m3, B1, B2, B3, E) and primitive (rho, v1, v2, v3, B1, B2, B3, p).
Any trailing shape is allowed, so the same functions serve single states and whole fields.
"""
from abc import ABC, abstractmethod

import numpy as np

from src.errors import DomainError

NVAR = 8
RHO = 0
MOM = slice(1, 4)
MAG = slice(4, 7)
ENERGY = 7
PRESSURE = 7

DISCRIMINANTS = ('printed', 'standard')


class Eos(ABC):
    """Equation of state seam; only the ideal gas law ships"""

    @abstractmethod
    def pressure(self, rho, internal_energy):
        """Thermal pressure from the internal energy per unit volume"""

    @abstractmethod
    def internal_energy(self, rho, p):
        """Internal energy per unit volume"""

    @abstractmethod
    def specific_internal_energy(self, rho, p):
        """e(rho, p)"""

    @abstractmethod
    def sound_speed_squared(self, rho, p):
        pass

    @abstractmethod
    def energy_pressure_derivative(self, rho, p):
        """d(rho e)/dp at fixed rho"""


class IdealEos(Eos):
    """Ideal gas, e = p / (rho (gamma - 1))"""

    def __init__(self, gamma=5.0 / 3.0):
        if not gamma > 1.0:
            raise DomainError(f"gamma must be > 1, got {gamma}")
        self.gamma = float(gamma)

    def __repr__(self):
        return f'<IdealEos gamma={self.gamma}>'

    def pressure(self, rho, internal_energy):
        return (self.gamma - 1.0) * internal_energy

    def internal_energy(self, rho, p):
        return p / (self.gamma - 1.0)

    def specific_internal_energy(self, rho, p):
        return p / (rho * (self.gamma - 1.0))

    def sound_speed_squared(self, rho, p):
        return self.gamma * p / rho

    def energy_pressure_derivative(self, rho, p):
        return np.full_like(np.asarray(p, dtype=float), 1.0 / (self.gamma - 1.0))


def _first_bad(mask):
    """Index of the first True entry of a boolean array, or None"""
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None if not mask else ()
    hits = np.argwhere(mask)
    return tuple(int(c) for c in hits[0]) if len(hits) else None


def _require_positive_density(U, what):
    rho = np.asarray(U)[RHO]
    bad = ~(rho > 0.0)
    if np.any(bad):
        raise DomainError(f"{what}: non-positive density", cell=_first_bad(bad))
    return rho


def _require_admissible(U, what):
    ok = is_admissible(U)
    if not np.all(ok):
        raise DomainError(f"{what}: inadmissible state", cell=_first_bad(~ok))


# ---------------------------------------------------
# CONVERSIONS
# ---------------------------------------------------
def internal_energy(U):
    """E - (|m|^2/rho + |B|^2)/2"""
    U = np.asarray(U, dtype=float)
    rho = _require_positive_density(U, "internal_energy")
    m, B = U[MOM], U[MAG]
    return U[ENERGY] - 0.5 * (np.sum(m * m, axis=0) / rho + np.sum(B * B, axis=0))


def _internal_energy_unchecked(U):
    rho = U[RHO]
    safe = np.where(rho > 0.0, rho, 1.0)
    m, B = U[MOM], U[MAG]
    return U[ENERGY] - 0.5 * (np.sum(m * m, axis=0) / safe + np.sum(B * B, axis=0))


def is_admissible(U, eps_rho=0.0, eps_e=0.0):
    """Elementwise membership test rho > eps_rho and internal energy > eps_e; False on NaN"""
    U = np.asarray(U, dtype=float)
    rho = U[RHO]
    with np.errstate(invalid='ignore', over='ignore'):
        eint = _internal_energy_unchecked(U)
        return (rho > eps_rho) & (eint > eps_e) & np.all(np.isfinite(U), axis=0)


def primitive_from_conserved(U, eos):
    U = np.asarray(U, dtype=float)
    rho = _require_positive_density(U, "primitive_from_conserved")
    W = np.empty_like(U)
    W[RHO] = rho
    W[MOM] = U[MOM] / rho
    W[MAG] = U[MAG]
    W[PRESSURE] = eos.pressure(rho, internal_energy(U))
    return W


def conserved_from_primitive(W, eos):
    W = np.asarray(W, dtype=float)
    rho = _require_positive_density(W, "conserved_from_primitive")
    v, B = W[MOM], W[MAG]
    U = np.empty_like(W)
    U[RHO] = rho
    U[MOM] = rho * v
    U[MAG] = B
    U[ENERGY] = (eos.internal_energy(rho, W[PRESSURE])
                 + 0.5 * (rho * np.sum(v * v, axis=0) + np.sum(B * B, axis=0)))
    return U


def pressure(U, eos):
    U = np.asarray(U, dtype=float)
    return eos.pressure(U[RHO], internal_energy(U))


# ---------------------------------------------------
# FLUX AND SOURCE
# ---------------------------------------------------
def physical_flux(U, direction, eos):
    """Ideal MHD flux F_direction(U), direction in {1, 2}"""
    U = np.asarray(U, dtype=float)
    _require_admissible(U, "physical_flux")
    a = _axis(direction)
    rho = U[RHO]
    v = U[MOM] / rho
    B = U[MAG]
    p = eos.pressure(rho, internal_energy(U))
    ptot = p + 0.5 * np.sum(B * B, axis=0)
    vB = np.sum(v * B, axis=0)

    F = np.empty_like(U)
    F[RHO] = U[1 + a]
    F[MOM] = U[1 + a] * v - B[a] * B
    F[1 + a] += ptot
    F[MAG] = v[a] * B - B[a] * v
    F[ENERGY] = v[a] * (U[ENERGY] + ptot) - B[a] * vB
    return F


def powell_source_vector(U):
    """(0, B, v, v.B) of the Godunov-Powell source term"""
    U = np.asarray(U, dtype=float)
    rho = _require_positive_density(U, "powell_source_vector")
    v = U[MOM] / rho
    B = U[MAG]
    S = np.empty_like(U)
    S[RHO] = 0.0
    S[MOM] = B
    S[MAG] = v
    S[ENERGY] = np.sum(v * B, axis=0)
    return S


# ---------------------------------------------------
# WAVE SPEEDS
# ---------------------------------------------------
def _axis(direction):
    if direction not in (1, 2):
        raise DomainError(f"direction must be 1 or 2, got {direction}")
    return direction - 1


def sound_like_speed(rho, p, eos):
    """C_s = p / (rho sqrt(2 e))"""
    e = eos.specific_internal_energy(rho, p)
    return p / (rho * np.sqrt(2.0 * e))


def _fast_bound(rho, p, B, a, eos, discriminant):
    cs2 = sound_like_speed(rho, p, eos) ** 2
    b2 = np.sum(B * B, axis=0)
    if discriminant == 'printed':
        disc = ((cs2 + b2) / rho) ** 2 - 4.0 * cs2 * B[a] ** 2 / rho
    elif discriminant == 'standard':
        disc = (cs2 + b2 / rho) ** 2 - 4.0 * cs2 * B[a] ** 2 / rho
    else:
        raise DomainError(f"unknown discriminant form '{discriminant}'")
    return np.sqrt(0.5 * (cs2 + b2 / rho + np.sqrt(np.maximum(disc, 0.0))))


def fast_speed_bound(U, direction, eos, discriminant='printed'):
    """Fast-speed-like bound C_i used by the positivity CFL condition"""
    U = np.asarray(U, dtype=float)
    _require_admissible(U, "fast_speed_bound")
    rho = U[RHO]
    p = eos.pressure(rho, internal_energy(U))
    return _fast_bound(rho, p, U[MAG], _axis(direction), eos, discriminant)


def pair_viscosity(U, Ut, direction, eos, discriminant='printed'):
    """Viscosity bound alpha_i(U, Ut) for a pair of admissible states; symmetric"""
    U = np.asarray(U, dtype=float)
    Ut = np.asarray(Ut, dtype=float)
    _require_admissible(U, "pair_viscosity")
    _require_admissible(Ut, "pair_viscosity")
    a = _axis(direction)

    rho, rhot = U[RHO], Ut[RHO]
    vi, vti = U[1 + a] / rho, Ut[1 + a] / rhot
    c = _fast_bound(rho, eos.pressure(rho, internal_energy(U)), U[MAG], a, eos, discriminant)
    ct = _fast_bound(rhot, eos.pressure(rhot, internal_energy(Ut)), Ut[MAG], a, eos, discriminant)

    sr, srt = np.sqrt(rho), np.sqrt(rhot)
    roe = (sr * vi + srt * vti) / (sr + srt) + np.maximum(c, ct)
    dB = U[MAG] - Ut[MAG]
    jump = np.sqrt(np.sum(dB * dB, axis=0)) / (sr + srt)
    return np.maximum(np.maximum(np.abs(vi) + c, np.abs(vti) + ct), roe) + jump
