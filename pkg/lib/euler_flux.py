"""
Fluxes and characteristic structure of the Euler systems

    d_t u + sum_k d_k f_k(u) = 0

for the full (mass, momentum, energy) and the isentropic (mass, momentum)
gas dynamics equations.

Two families of functions live here:

    * state functions on `ConsState` taking an arbitrary unit direction
      (flux_euler, flux_isentropic, char_speeds, hyperbolicity_check);
    * array functions used by the schemes; they evaluate the flux normal
      to the first velocity component of (m, ...) arrays, every further
      momentum component being carried passively (flux_normal,
      flux_jacobian_apply, normal_wave_speeds).
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from gas_thermo import (
    ConsState,
    GasMode,
    GasModel,
    momentum_square,
    prim_from_cons,
    primitive_arrays,
    sound_speed,
    sound_speed_array,
    validate_cells,
)
from globals import InvalidState, ModeError, SingularJacobian

StateVec = np.ndarray


@dataclass(frozen=True)
class Direction:
    xi: Tuple[float, ...]

    def __post_init__(self):
        xi = tuple(float(x) for x in np.atleast_1d(self.xi))
        object.__setattr__(self, "xi", xi)
        norm = math.sqrt(sum(x * x for x in xi))
        if abs(norm - 1.0) > 1e-14:
            raise ValueError("direction must be a unit vector, |xi| = %r" % norm)

    @classmethod
    def axis(cls, dim: int, k: int = 0) -> "Direction":
        xi = [0.0] * dim
        xi[k] = 1.0
        return cls(tuple(xi))

    @classmethod
    def from_angle(cls, theta: float) -> "Direction":
        return cls((math.cos(theta), math.sin(theta)))

    @property
    def dim(self) -> int:
        return len(self.xi)

    def vector(self) -> np.ndarray:
        return np.array(self.xi)


def _check_dims(u: ConsState, direction: Direction):
    if u.dim != direction.dim:
        raise ValueError(
            "state has %d velocity components, direction has %d" % (u.dim, direction.dim)
        )


def _vector_flux(g: GasModel, vec: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """
    Directional flux of a raw conservative vector, no validation
    """
    dim = xi.shape[0]
    rho = vec[0]
    m = vec[1 : dim + 1]
    un = float(np.dot(m, xi)) / rho
    if g.isentropic:
        p = g.kappa0 * rho**g.gamma
    else:
        p = (g.gamma - 1.0) * (vec[dim + 1] - 0.5 * float(np.dot(m, m)) / rho)
    out = np.empty_like(vec)
    out[0] = rho * un
    out[1 : dim + 1] = un * m + p * xi
    if not g.isentropic:
        out[dim + 1] = un * (vec[dim + 1] + p)
    return out


def flux_euler(g: GasModel, u: ConsState, direction: Direction) -> StateVec:
    g.require(GasMode.FULL_EULER, "flux_euler")
    _check_dims(u, direction)
    prim_from_cons(g, u)
    return _vector_flux(g, u.vector(), direction.vector())


def flux_isentropic(g: GasModel, u: ConsState, direction: Direction) -> StateVec:
    g.require(GasMode.ISENTROPIC, "flux_isentropic")
    _check_dims(u, direction)
    return _vector_flux(g, u.vector(), direction.vector())


def flux(g: GasModel, u: ConsState, direction: Direction) -> StateVec:
    """
    Flux of the system selected by the gas mode
    """
    if g.isentropic:
        return flux_isentropic(g, u, direction)
    return flux_euler(g, u, direction)


def char_speeds(g: GasModel, u: ConsState, direction: Direction) -> List[float]:
    """
    Eigenvalues of xi . grad f(u), sorted ascending
    """
    _check_dims(u, direction)
    w = prim_from_cons(g, u)
    c = sound_speed(g, w)
    un = float(np.dot(w.v, direction.xi))
    n_mid = direction.dim if not g.isentropic else direction.dim - 1
    return [un - c] + [un] * n_mid + [un + c]


@dataclass(frozen=True)
class HyperbolicityReport:
    numeric: Tuple[float, ...]
    analytic: Tuple[float, ...]
    max_mismatch: float
    max_imag: float
    scale: float

    @property
    def real(self) -> bool:
        return self.max_imag <= 1e-7 * self.scale

    @property
    def n_eigenvalues(self) -> int:
        return len(self.numeric)


def numeric_jacobian(g: GasModel, u: ConsState, direction: Direction, h: float = 1e-6) -> np.ndarray:
    """
    xi . grad f(u) by central differences with step h (1 + |u_k|) in component k
    """
    vec = u.vector()
    xi = direction.vector()
    jac = np.empty((vec.shape[0], vec.shape[0]))
    for k in range(vec.shape[0]):
        step = h * (1.0 + abs(vec[k]))
        plus = vec.copy()
        minus = vec.copy()
        plus[k] += step
        minus[k] -= step
        jac[:, k] = (_vector_flux(g, plus, xi) - _vector_flux(g, minus, xi)) / (2.0 * step)
    return jac


def hyperbolicity_check(
    g: GasModel, u: ConsState, direction: Direction, h: float = 1e-6
) -> HyperbolicityReport:
    """
    Compare the eigenvalues of the finite-difference flux Jacobian
    with the analytic characteristic speeds
    """
    analytic = char_speeds(g, u, direction)
    jac = numeric_jacobian(g, u, direction, h)
    if not np.isfinite(jac).all():
        raise SingularJacobian("non-finite flux Jacobian")
    try:
        eig = np.linalg.eigvals(jac)
    except np.linalg.LinAlgError as exc:
        raise SingularJacobian("eigenvalue computation failed: %s" % exc)
    if not np.isfinite(eig).all():
        raise SingularJacobian("non-finite eigenvalues")

    order = np.argsort(eig.real, kind="stable")
    eig = eig[order]
    numeric = tuple(float(x) for x in eig.real)
    mismatch = max(abs(a - b) for a, b in zip(numeric, analytic))
    scale = 1.0 + max(abs(x) for x in analytic)
    report = HyperbolicityReport(
        numeric=numeric,
        analytic=tuple(analytic),
        max_mismatch=float(mismatch),
        max_imag=float(np.max(np.abs(eig.imag))),
        scale=scale,
    )
    logging.debug("hyperbolicity check: %s", report)
    return report


#
# array versions, flux normal to the first velocity component
#


def flux_normal(g: GasModel, u: np.ndarray) -> np.ndarray:
    rho, vel, p = primitive_arrays(g, u)
    un = vel[0]
    f = u * un
    f[1] = f[1] + p
    if not g.isentropic:
        f[-1] = un * (u[-1] + p)
    return f


def normal_wave_speeds(g: GasModel, u: np.ndarray):
    """
    Return (normal velocity, sound speed) arrays
    """
    rho, vel, p = primitive_arrays(g, u)
    return vel[0], sound_speed_array(g, rho, p)


def flux_jacobian_apply(g: GasModel, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """
    A(u) w with A the Jacobian of `flux_normal`, evaluated cell by cell
    """
    gm1 = g.gamma - 1.0
    rho, vel, p = primitive_arrays(g, u)
    dim = vel.shape[0]
    un = vel[0]
    out = np.empty_like(w)
    out[0] = w[1]

    transverse = 0.0
    for t in range(1, dim):
        out[1 + t] = -un * vel[t] * w[0] + vel[t] * w[1] + un * w[1 + t]
        transverse = transverse + vel[t] * w[1 + t]

    if g.isentropic:
        c2 = g.gamma * p / rho
        out[1] = (c2 - un * un) * w[0] + 2.0 * un * w[1]
        return out

    q2 = momentum_square(vel)
    enthalpy = (u[-1] + p) / rho
    out[1] = (
        (0.5 * gm1 * q2 - un * un) * w[0]
        + (3.0 - g.gamma) * un * w[1]
        - gm1 * transverse
        + gm1 * w[-1]
    )
    out[-1] = (
        un * (0.5 * gm1 * q2 - enthalpy) * w[0]
        + (enthalpy - gm1 * un * un) * w[1]
        - gm1 * un * transverse
        + g.gamma * un * w[-1]
    )
    return out


def flux_jacobian(g: GasModel, u: ConsState) -> np.ndarray:
    """
    Analytic Jacobian of the flux along the first axis
    """
    vec = u.vector()
    n = vec.shape[0]
    states = np.repeat(vec[:, None], n, axis=1)
    return flux_jacobian_apply(g, states, np.eye(n))


def max_wave_speed(g: GasModel, grid) -> float:
    """
    max over cells and coordinate directions of |v . xi| + c
    """
    u = grid.u
    try:
        validate_cells(g, u)
    except InvalidState as exc:
        raise exc.annotate(where="max_wave_speed")
    rho, vel, p = primitive_arrays(g, u)
    c = sound_speed_array(g, rho, p)
    n_axes = u.ndim - 1
    speed = 0.0
    for k in range(n_axes):
        speed = max(speed, float(np.max(np.abs(vel[k]) + c)))
    return speed


def rotate_state(u: ConsState, rotation: np.ndarray) -> ConsState:
    """
    State with its momentum rotated by the orthogonal matrix `rotation`
    """
    m = rotation @ np.asarray(u.m)
    return ConsState(u.rho, tuple(m), u.rhoE)


def rotation_to_axis(direction: Direction) -> np.ndarray:
    """
    2D rotation matrix mapping `direction` onto the first axis
    """
    if direction.dim != 2:
        raise ModeError("rotations are implemented for two dimensions only")
    c, s = direction.xi
    return np.array([[c, s], [-s, c]])
