"""
`Scheme`, base class of the one-dimensional schemes.

Every scheme is written in conservation form

    u_i^{n+1} = u_i^n - dt/dx (F_{i+1/2} - F_{i-1/2})

and only has to provide the interface fluxes of the interior faces
(`_face_fluxes`); the fluxes are computed from a padded copy of the cells
with `_stencil` ghost cells per side. High-order schemes provide a
spatial operator instead and are advanced by SSP-RK3 (see timestep.py).

Configuration parameters:

    scheme.cfl.first_order
    scheme.cfl.vnr
    scheme.cfl.high_order
    scheme.limiter
    scheme.qvisc
    scheme.qlinear
    scheme.pswitch
    scheme.weno_eps
    scheme.highorder_flux
"""

import abc
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from config import CONFIG
from gas_thermo import GasModel, validate_cells
from globals import InvalidState
from grid import Grid1D, pad_axis
from riemann import FluxKind


class Limiter(str, Enum):
    MINMOD = "minmod"
    VAN_LEER = "van_leer"


class SplitMode(str, Enum):
    ALTERNATE = "alternate"
    SYMMETRIC = "symmetric"


class SchemeConfig(BaseModel):
    """
    Scheme selection and its parameters; `cfl=None` takes the scheme default
    """

    model_config = ConfigDict(frozen=True)

    scheme: str = "godunov"
    cfl: Optional[float] = None
    limiter: Limiter = Field(default_factory=lambda: Limiter(CONFIG["scheme.limiter"]))
    q_visc_coeff: float = Field(default_factory=lambda: CONFIG["scheme.qvisc"])
    q_linear_coeff: float = Field(default_factory=lambda: CONFIG["scheme.qlinear"])
    switch_coeff: float = Field(default_factory=lambda: CONFIG["scheme.pswitch"])
    weno_eps: float = Field(default_factory=lambda: CONFIG["scheme.weno_eps"])
    nonlinear_weights: bool = True
    flux: FluxKind = Field(default_factory=lambda: FluxKind(CONFIG["scheme.highorder_flux"]))
    split: SplitMode = SplitMode.ALTERNATE
    dt_power: float = 1.0

    @field_validator("scheme")
    @classmethod
    def _known_scheme(cls, value):
        names = sorted(all_schemes(as_dict=True))
        if value not in names:
            raise ValueError("unknown scheme %r, valid options: %s" % (value, ", ".join(names)))
        return value

    @field_validator("cfl")
    @classmethod
    def _cfl_range(cls, value):
        if value is not None and not 0.0 < value < 1.0:
            raise ValueError("cfl must lie in (0, 1), got %r" % value)
        return value

    @field_validator("q_visc_coeff", "q_linear_coeff", "switch_coeff")
    @classmethod
    def _nonnegative(cls, value):
        if value < 0.0:
            raise ValueError("dissipation coefficients must be nonnegative")
        return value

    @field_validator("weno_eps")
    @classmethod
    def _positive_eps(cls, value):
        if not value > 0.0:
            raise ValueError("weno_eps must be positive")
        return value

    @field_validator("dt_power")
    @classmethod
    def _dt_power(cls, value):
        if not value >= 1.0:
            raise ValueError("dt_power must be >= 1")
        return value

    def effective_cfl(self) -> float:
        if self.cfl is not None:
            return self.cfl
        return scheme_by_name(self.scheme).default_cfl()


class SchemeMC(abc.ABCMeta):
    """
    Scheme Metaclass.
    Defines string representation of schemes
    """

    def __repr__(cls):
        if hasattr(cls, "_class_repr"):
            return getattr(cls, "_class_repr")()
        return super().__repr__()


class Scheme(metaclass=SchemeMC):
    """
    An abstract class; a subclass sets

    * _scheme_name  name used by the configuration and the command line
    * _stencil      ghost cells needed per side
    * _cfl_key      configuration key of its default CFL number
    * _order        formal order on smooth solutions

    and implements `_face_fluxes()`.
    """

    _scheme_name = None
    _stencil = 1
    _cfl_key = "scheme.cfl.first_order"
    _order = 1

    @classmethod
    def _class_repr(cls):
        return "[Scheme: %s (%s)]" % (cls._scheme_name, cls.__name__)

    def __init__(self, g: GasModel, cfg: Optional[SchemeConfig] = None):
        self.g = g
        self.cfg = cfg if cfg is not None else SchemeConfig(scheme=self._scheme_name)

    @classmethod
    def name(cls):
        return cls._scheme_name

    @classmethod
    def stencil(cls):
        return cls._stencil

    @classmethod
    def order(cls):
        return cls._order

    @classmethod
    def default_cfl(cls):
        return CONFIG[cls._cfl_key]

    @abc.abstractmethod
    def _face_fluxes(self, padded: np.ndarray, ghost: int, dx: float, dt: float, step_index: int):
        """
        Return the (m, n+1) fluxes through the faces of the n interior cells
        """

    def face_fluxes(self, grid: Grid1D, dt: float, step_index: int = 0) -> np.ndarray:
        ghost = max(grid.ghost, self._stencil)
        padded = pad_axis(grid.u, ghost, grid.bc)
        return self._face_fluxes(padded, ghost, grid.dx, dt, step_index)

    def step(self, grid: Grid1D, dt: float, step_index: int = 0) -> Grid1D:
        fluxes = self.face_fluxes(grid, dt, step_index)
        u_new = grid.u - (dt / grid.dx) * (fluxes[:, 1:] - fluxes[:, :-1])
        self._check(u_new)
        return grid.with_cells(u_new)

    def _check(self, u: np.ndarray, **context):
        try:
            validate_cells(self.g, u)
        except InvalidState as exc:
            raise exc.annotate(scheme=self._scheme_name, **context)


def interior_pairs(padded: np.ndarray, ghost: int):
    """
    (left, right) cell arrays on both sides of the n+1 interior faces
    """
    n = padded.shape[-1] - 2 * ghost
    return padded[:, ghost - 1 : ghost + n], padded[:, ghost : ghost + n + 1]


def all_schemes(as_dict=False):
    """
    Return list of all known schemes
    If `as_dict` is True, return dict {'name': scheme} instead of a list.
    """

    def _all_subclasses(cls):
        return set(cls.__subclasses__()).union(
            set([s for c in cls.__subclasses__() for s in _all_subclasses(c)])
        )

    concrete = [x for x in _all_subclasses(Scheme) if x.name()]
    if as_dict:
        return {x.name(): x for x in concrete}
    return sorted(concrete, key=lambda x: x.name())


def scheme_by_name(name):
    """
    Return scheme class having this name,
    or None if nothing found
    """
    return all_schemes(as_dict=True).get(name)


def make_scheme(g: GasModel, cfg: SchemeConfig) -> Scheme:
    return scheme_by_name(cfg.scheme)(g, cfg)
