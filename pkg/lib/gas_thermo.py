"""
Polytropic gas thermodynamics.

For a polytropic gas

    p = R rho theta,  e = c_v theta,  gamma = 1 + R/c_v,
    p = kappa rho^gamma exp(S/c_v),

and for the isentropic system p = kappa0 rho^gamma.

Exports:

    GasMode, GasModel, PrimState, ConsState
    cons_from_prim(), prim_from_cons()
    sound_speed(), entropy_S(), temperature(), internal_energy()
    pressure_isentropic()

and the array counterparts used by the schemes. Arrays of conservative
variables have the variables along the first axis:

    full Euler   (rho, m_1, ..., m_d, rhoE)     m = d + 2
    isentropic   (rho, m_1, ..., m_d)           m = d + 1

Configuration parameters:

    gas.vacuum_floor
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from config import CONFIG
from globals import InvalidState, ModeError

VACUUM_FLOOR = CONFIG["gas.vacuum_floor"]


class GasMode(str, Enum):
    FULL_EULER = "full_euler"
    ISENTROPIC = "isentropic"


class GasModel(BaseModel):
    """
    Polytropic gas parameters.

    If neither R nor c_v is given, R = 1 and c_v = 1/(gamma-1);
    if one of them is given, the other one follows from gamma = 1 + R/c_v.
    """

    model_config = ConfigDict(frozen=True)

    gamma: float = 1.4
    gas_constant_R: Optional[float] = None
    c_v: Optional[float] = None
    kappa: float = 1.0
    kappa0: float = 1.0
    mode: GasMode = GasMode.FULL_EULER

    @model_validator(mode="before")
    @classmethod
    def _fill_constants(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        gamma = float(data.get("gamma", 1.4))
        if not gamma > 1.0:
            raise ValueError("gamma must be > 1, got %s" % gamma)

        gas_r = data.get("gas_constant_R")
        c_v = data.get("c_v")
        if gas_r is None and c_v is None:
            gas_r, c_v = 1.0, 1.0 / (gamma - 1.0)
        elif c_v is None:
            c_v = float(gas_r) / (gamma - 1.0)
        elif gas_r is None:
            gas_r = float(c_v) * (gamma - 1.0)
        data["gas_constant_R"] = gas_r
        data["c_v"] = c_v
        return data

    @model_validator(mode="after")
    def _check_constants(self):
        for name in ("gas_constant_R", "c_v", "kappa", "kappa0"):
            if not getattr(self, name) > 0.0:
                raise ValueError("%s must be positive" % name)
        implied = 1.0 + self.gas_constant_R / self.c_v
        if abs(implied - self.gamma) > 1e-12 * self.gamma:
            raise ValueError(
                "gamma=%r inconsistent with 1 + R/c_v = %r" % (self.gamma, implied)
            )
        return self

    @property
    def isentropic(self) -> bool:
        return self.mode == GasMode.ISENTROPIC

    def n_vars(self, dim: int) -> int:
        """
        Number of conserved variables in `dim` space dimensions
        """
        return dim + 1 if self.isentropic else dim + 2

    def velocity_dim(self, n_vars: int) -> int:
        """
        Number of velocity components of a state vector with `n_vars` entries
        """
        dim = n_vars - 1 if self.isentropic else n_vars - 2
        if dim < 1:
            raise ValueError("%d variables do not form a %s state" % (n_vars, self.mode.value))
        return dim

    def require(self, mode: GasMode, what: str):
        if self.mode != mode:
            raise ModeError("%s needs mode %s, gas is %s" % (what, mode.value, self.mode.value))


def _check_positive(rho, p=None):
    if not (math.isfinite(rho) and rho > VACUUM_FLOOR):
        raise InvalidState("nonpositive density", rho=rho)
    if p is not None and not (math.isfinite(p) and p > VACUUM_FLOOR):
        raise InvalidState("nonpositive pressure", p=p)


@dataclass(frozen=True)
class PrimState:
    rho: float
    v: Tuple[float, ...]
    p: float

    def __post_init__(self):
        velocity = np.atleast_1d(np.asarray(self.v, dtype=float))
        object.__setattr__(self, "v", tuple(float(x) for x in velocity))
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "p", float(self.p))
        _check_positive(self.rho, self.p)
        if not all(math.isfinite(x) for x in self.v):
            raise InvalidState("non-finite velocity", v=self.v)

    @property
    def dim(self) -> int:
        return len(self.v)

    @property
    def u(self) -> float:
        """Velocity component along the first axis"""
        return self.v[0]

    def mirrored(self) -> "PrimState":
        """State seen in a frame with the first axis reversed"""
        return PrimState(self.rho, (-self.v[0],) + self.v[1:], self.p)


@dataclass(frozen=True)
class ConsState:
    rho: float
    m: Tuple[float, ...]
    rhoE: Optional[float] = None

    def __post_init__(self):
        momentum = np.atleast_1d(np.asarray(self.m, dtype=float))
        object.__setattr__(self, "m", tuple(float(x) for x in momentum))
        object.__setattr__(self, "rho", float(self.rho))
        _check_positive(self.rho)
        if self.rhoE is not None:
            object.__setattr__(self, "rhoE", float(self.rhoE))
            internal = self.rhoE - 0.5 * _square(self.m) / self.rho
            if not (math.isfinite(internal) and internal > 0.0):
                raise InvalidState("nonpositive internal energy", rhoE=self.rhoE)

    @property
    def dim(self) -> int:
        return len(self.m)

    def vector(self) -> np.ndarray:
        """
        Conserved variables as a flat array
        """
        tail = () if self.rhoE is None else (self.rhoE,)
        return np.array((self.rho,) + self.m + tail, dtype=float)

    @classmethod
    def from_vector(cls, g: GasModel, vec) -> "ConsState":
        vec = np.asarray(vec, dtype=float)
        dim = g.velocity_dim(vec.shape[0])
        rho_e = None if g.isentropic else vec[dim + 1]
        return cls(vec[0], tuple(vec[1 : dim + 1]), rho_e)


def _square(vec) -> float:
    acc = 0.0
    for x in vec:
        acc = acc + x * x
    return acc


def cons_from_prim(g: GasModel, w: PrimState) -> ConsState:
    m = tuple(w.rho * x for x in w.v)
    if g.isentropic:
        return ConsState(w.rho, m)
    rho_e = w.p / (g.gamma - 1.0) + 0.5 * w.rho * _square(w.v)
    return ConsState(w.rho, m, rho_e)


def prim_from_cons(g: GasModel, u: ConsState) -> PrimState:
    v = tuple(x / u.rho for x in u.m)
    if g.isentropic:
        return PrimState(u.rho, v, pressure_isentropic(g, u.rho))
    if u.rhoE is None:
        raise ModeError("full Euler state without total energy")
    p = (g.gamma - 1.0) * (u.rhoE - 0.5 * _square(u.m) / u.rho)
    return PrimState(u.rho, v, p)


def sound_speed(g: GasModel, w: PrimState) -> float:
    _check_positive(w.rho, w.p)
    return math.sqrt(g.gamma * w.p / w.rho)


def entropy_S(g: GasModel, w: PrimState) -> float:
    """
    Specific entropy S = c_v ln(p / (kappa rho^gamma))
    """
    g.require(GasMode.FULL_EULER, "entropy")
    _check_positive(w.rho, w.p)
    return g.c_v * math.log(w.p / (g.kappa * w.rho**g.gamma))


def temperature(g: GasModel, w: PrimState) -> float:
    g.require(GasMode.FULL_EULER, "temperature")
    _check_positive(w.rho, w.p)
    return w.p / (g.gas_constant_R * w.rho)


def internal_energy(g: GasModel, w: PrimState) -> float:
    """
    Specific internal energy e = p / ((gamma-1) rho)
    """
    _check_positive(w.rho, w.p)
    return w.p / ((g.gamma - 1.0) * w.rho)


def pressure_isentropic(g: GasModel, rho: float) -> float:
    g.require(GasMode.ISENTROPIC, "isentropic pressure law")
    _check_positive(rho)
    return g.kappa0 * rho**g.gamma


#
# array versions
#


def momentum_square(m: np.ndarray) -> np.ndarray:
    """
    |m|^2 summed component by component in a fixed order
    """
    acc = m[0] * m[0]
    for k in range(1, m.shape[0]):
        acc = acc + m[k] * m[k]
    return acc


def pressure_array(g: GasModel, u: np.ndarray) -> np.ndarray:
    rho = u[0]
    if g.isentropic:
        return g.kappa0 * rho**g.gamma
    dim = g.velocity_dim(u.shape[0])
    return (g.gamma - 1.0) * (u[dim + 1] - 0.5 * momentum_square(u[1 : dim + 1]) / rho)


def primitive_arrays(g: GasModel, u: np.ndarray):
    """
    Return (rho, vel, p) for conservative array `u`;
    `vel` has the velocity components along its first axis
    """
    dim = g.velocity_dim(u.shape[0])
    rho = u[0]
    vel = u[1 : dim + 1] / rho
    return rho, vel, pressure_array(g, u)


def conservative_arrays(g: GasModel, rho, vel, p) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    vel = np.asarray(vel, dtype=float)
    parts = [rho[None]] + [(rho * vel[k])[None] for k in range(vel.shape[0])]
    if not g.isentropic:
        rho_e = p / (g.gamma - 1.0) + 0.5 * rho * momentum_square(vel)
        parts.append(np.asarray(rho_e, dtype=float)[None])
    return np.concatenate(parts, axis=0)


def sound_speed_array(g: GasModel, rho, p):
    return np.sqrt(g.gamma * p / rho)


def entropy_array(g: GasModel, rho, p):
    g.require(GasMode.FULL_EULER, "entropy")
    return g.c_v * np.log(p / (g.kappa * rho**g.gamma))


def validate_cells(g: GasModel, u: np.ndarray):
    """
    Raise InvalidState naming the first cell with nonpositive density
    or pressure (or a non-finite value)
    """
    rho = u[0]
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        p = pressure_array(g, u)
        good = np.isfinite(u).all(axis=0) & (rho > VACUUM_FLOOR) & (p > VACUUM_FLOOR)
    if good.all():
        return
    flat = int(np.argmin(good.ravel()))
    cell = np.unravel_index(flat, good.shape)
    cell = int(cell[0]) if len(cell) == 1 else tuple(int(i) for i in cell)
    raise InvalidState(
        "nonpositive density or pressure",
        cell=cell,
        rho=float(rho[cell]),
        p=float(p[cell]),
    )
