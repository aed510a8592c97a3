"""
Interface reconstruction on padded arrays.

Both reconstructions take an array whose last axis holds n interior
cells plus `ghost` cells per side and return the (left, right) values
at the n+1 interior faces:

    left[..., k]    limit from cell ghost-1+k
    right[..., k]   limit from cell ghost+k
"""

import numpy as np

D_WEIGHTS = (0.1, 0.6, 0.3)


def minmod(a, b):
    return np.where(a * b > 0.0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def van_leer(a, b):
    product = a * b
    with np.errstate(divide="ignore", invalid="ignore"):
        harmonic = 2.0 * product / (a + b)
    return np.where(product > 0.0, harmonic, 0.0)


LIMITERS = {
    "minmod": minmod,
    "van_leer": van_leer,
}


def limited_slopes(w: np.ndarray, limiter: str) -> np.ndarray:
    """
    Slopes (per cell width) of cells 1 .. N-2 of `w`
    """
    backward = w[..., 1:-1] - w[..., :-2]
    forward = w[..., 2:] - w[..., 1:-1]
    return LIMITERS[getattr(limiter, "value", limiter)](backward, forward)


def reconstruct_muscl(w: np.ndarray, limiter: str, ghost: int):
    if ghost < 2:
        raise ValueError("MUSCL reconstruction needs 2 ghost cells, got %d" % ghost)
    n_faces = w.shape[-1] - 2 * ghost + 1
    slopes = limited_slopes(w, limiter)
    # slopes[..., j] belongs to cell j + 1
    lower = slice(ghost - 1, ghost - 1 + n_faces)
    upper = slice(ghost, ghost + n_faces)
    left = w[..., lower] + 0.5 * slopes[..., ghost - 2 : ghost - 2 + n_faces]
    right = w[..., upper] - 0.5 * slopes[..., ghost - 1 : ghost - 1 + n_faces]
    return left, right


def weno5_weights(v0, v1, v2, v3, v4, eps=1e-6, nonlinear=True):
    """
    Nonlinear weights of the three candidate stencils for the value at
    the right face of the centre cell v2
    """
    if not nonlinear:
        shape = np.shape(v2)
        return tuple(np.full(shape, d) for d in D_WEIGHTS)

    b0 = 13.0 / 12.0 * (v0 - 2.0 * v1 + v2) ** 2 + 0.25 * (v0 - 4.0 * v1 + 3.0 * v2) ** 2
    b1 = 13.0 / 12.0 * (v1 - 2.0 * v2 + v3) ** 2 + 0.25 * (v1 - v3) ** 2
    b2 = 13.0 / 12.0 * (v2 - 2.0 * v3 + v4) ** 2 + 0.25 * (3.0 * v2 - 4.0 * v3 + v4) ** 2

    a0 = D_WEIGHTS[0] / (eps + b0) ** 2
    a1 = D_WEIGHTS[1] / (eps + b1) ** 2
    a2 = D_WEIGHTS[2] / (eps + b2) ** 2
    total = a0 + a1 + a2
    return a0 / total, a1 / total, a2 / total


def weno5_face(v0, v1, v2, v3, v4, eps=1e-6, nonlinear=True):
    """
    Fifth-order value at the face between v2 and v3 from the cell averages v0..v4
    """
    q0 = (2.0 * v0 - 7.0 * v1 + 11.0 * v2) / 6.0
    q1 = (-v1 + 5.0 * v2 + 2.0 * v3) / 6.0
    q2 = (2.0 * v2 + 5.0 * v3 - v4) / 6.0
    w0, _, w2 = weno5_weights(v0, v1, v2, v3, v4, eps, nonlinear)
    return q1 + w0 * (q0 - q1) + w2 * (q2 - q1)


def reconstruct_weno5(w: np.ndarray, ghost: int, eps=1e-6, nonlinear=True):
    if ghost < 3:
        raise ValueError("WENO5 reconstruction needs 3 ghost cells, got %d" % ghost)
    n_faces = w.shape[-1] - 2 * ghost + 1

    def shifted(offset):
        start = ghost - 1 + offset
        return w[..., start : start + n_faces]

    left = weno5_face(shifted(-2), shifted(-1), shifted(0), shifted(1), shifted(2), eps, nonlinear)
    right = weno5_face(shifted(3), shifted(2), shifted(1), shifted(0), shifted(-1), eps, nonlinear)
    return left, right
