"""
Eight-wave characteristic basis of the 1D ideal MHD flux Jacobian.

Right eigenvectors are built in primitive variables with the Roe-Balsara
normalization and mapped to conserved variables with dU/dW.  Wave order:
fast-, Alfven-, slow-, entropy, divergence, slow+, Alfven+, fast+.
"""
import logging

import numpy as np

from src.state import primitive_from_conserved

logger = logging.getLogger(__name__)

TANGENTIAL_FLOOR = 1e-12
SINGULAR_RATIO = 1e-12
_HALF_SQRT2 = np.sqrt(0.5)


def _axes(direction):
    # normal axis followed by the two tangential axes, cyclic
    return {1: (0, 1, 2), 2: (1, 2, 0)}[direction]


def primitive_right_eigenvectors(W, direction, eos):
    """Right eigenvectors in primitive variables, shape W.shape[1:] + (8, 8)"""
    n, t1, t2 = _axes(direction)
    rho, p = W[0], W[7]
    B = W[4:7]
    a2 = eos.sound_speed_squared(rho, p)
    a = np.sqrt(a2)
    sr = np.sqrt(rho)

    bn2 = B[n] ** 2 / rho
    bt2 = (B[t1] ** 2 + B[t2] ** 2) / rho
    root = np.sqrt(np.maximum((a2 + bn2 + bt2) ** 2 - 4.0 * a2 * bn2, 0.0))
    cf2 = 0.5 * (a2 + bn2 + bt2 + root)
    cs2 = np.maximum(0.5 * (a2 + bn2 + bt2 - root), 0.0)
    cf, cs = np.sqrt(cf2), np.sqrt(cs2)

    span = cf2 - cs2
    close = span <= 1e-12 * np.maximum(cf2, np.finfo(float).tiny)
    safe = np.where(close, 1.0, span)
    alpha_f = np.where(close, _HALF_SQRT2, np.sqrt(np.clip((a2 - cs2) / safe, 0.0, 1.0)))
    alpha_s = np.where(close, _HALF_SQRT2, np.sqrt(np.clip((cf2 - a2) / safe, 0.0, 1.0)))

    flat = bt2 < TANGENTIAL_FLOOR
    bt = np.sqrt(np.where(flat, 1.0, B[t1] ** 2 + B[t2] ** 2))
    beta1 = np.where(flat, _HALF_SQRT2, B[t1] / bt)
    beta2 = np.where(flat, _HALF_SQRT2, B[t2] / bt)
    sign = np.where(B[n] >= 0.0, 1.0, -1.0)

    R = np.zeros(rho.shape + (8, 8))
    vn, vt1, vt2 = 1 + n, 1 + t1, 1 + t2
    bt1_row, bt2_row = 4 + t1, 4 + t2
    for col, s in ((0, -1.0), (7, 1.0)):
        R[..., 0, col] = rho * alpha_f
        R[..., vn, col] = s * alpha_f * cf
        R[..., vt1, col] = -s * alpha_s * cs * beta1 * sign
        R[..., vt2, col] = -s * alpha_s * cs * beta2 * sign
        R[..., bt1_row, col] = alpha_s * a * beta1 * sr
        R[..., bt2_row, col] = alpha_s * a * beta2 * sr
        R[..., 7, col] = rho * a2 * alpha_f
    for col, s in ((1, -1.0), (6, 1.0)):
        R[..., vt1, col] = s * sign * beta2
        R[..., vt2, col] = -s * sign * beta1
        R[..., bt1_row, col] = -beta2 * sr
        R[..., bt2_row, col] = beta1 * sr
    for col, s in ((2, -1.0), (5, 1.0)):
        R[..., 0, col] = rho * alpha_s
        R[..., vn, col] = s * alpha_s * cs
        R[..., vt1, col] = s * alpha_f * cf * beta1 * sign
        R[..., vt2, col] = s * alpha_f * cf * beta2 * sign
        R[..., bt1_row, col] = -alpha_f * a * beta1 * sr
        R[..., bt2_row, col] = -alpha_f * a * beta2 * sr
        R[..., 7, col] = rho * a2 * alpha_s
    R[..., 0, 3] = 1.0
    R[..., 4 + n, 4] = 1.0
    return R


def primitive_to_conserved_jacobian(W, eos):
    """dU/dW, shape W.shape[1:] + (8, 8)"""
    rho, p = W[0], W[7]
    v, B = W[1:4], W[4:7]
    M = np.zeros(rho.shape + (8, 8))
    M[..., 0, 0] = 1.0
    M[..., 7, 0] = 0.5 * np.sum(v * v, axis=0)
    for k in range(3):
        M[..., 1 + k, 0] = v[k]
        M[..., 1 + k, 1 + k] = rho
        M[..., 4 + k, 4 + k] = 1.0
        M[..., 7, 1 + k] = rho * v[k]
        M[..., 7, 4 + k] = B[k]
    M[..., 7, 7] = eos.energy_pressure_derivative(rho, p)
    return M


def characteristic_basis(U, direction, eos, count=None):
    """Conserved right/left eigenvector matrices at the states U (8, ...).

    Returns (R, L, fallbacks).  Where R is numerically singular both matrices
    are replaced by the identity, i.e. that stencil is reconstructed
    component-wise; `fallbacks` counts those states, restricted to the index
    `count` of the state axes when given.
    """
    W = primitive_from_conserved(U, eos)
    R = primitive_to_conserved_jacobian(W, eos) @ primitive_right_eigenvectors(W, direction, eos)

    sv = np.linalg.svd(R, compute_uv=False)
    with np.errstate(invalid='ignore', divide='ignore'):
        singular = ~(sv[..., -1] >= SINGULAR_RATIO * sv[..., 0])
    fallbacks = int(np.count_nonzero(singular if count is None else singular[count]))
    if np.any(singular):
        logger.debug("characteristic basis singular at %d states, using component-wise", fallbacks)
        R[singular] = np.eye(8)
    L = np.linalg.inv(R)
    return R, L, fallbacks
