"""
One-call step functions for the individual schemes,
used where a scheme is needed without a configuration
"""

from typing import Optional

from riemann import FluxKind

from .classic import LaxFriedrichs, MacCormack, Richtmyer, VNRViscosity
from .godunov import Godunov, GodunovHLL, GodunovRusanov
from .scheme import SchemeConfig

_GODUNOV = {
    FluxKind.EXACT: Godunov,
    FluxKind.HLL: GodunovHLL,
    FluxKind.RUSANOV: GodunovRusanov,
}


def step_lax_friedrichs(g, grid, dt):
    return LaxFriedrichs(g).step(grid, dt)


def step_godunov(g, grid, dt, flux_kind=FluxKind.EXACT):
    return _GODUNOV[FluxKind(flux_kind)](g).step(grid, dt)


def step_richtmyer(g, grid, dt):
    return Richtmyer(g).step(grid, dt)


def step_maccormack(g, grid, dt, step_index=0):
    return MacCormack(g).step(grid, dt, step_index)


def step_vnr_viscosity(g, grid, dt, q_visc_coeff: Optional[float] = None, q_linear_coeff: Optional[float] = None):
    options = {"scheme": VNRViscosity.name()}
    if q_visc_coeff is not None:
        options["q_visc_coeff"] = q_visc_coeff
    if q_linear_coeff is not None:
        options["q_linear_coeff"] = q_linear_coeff
    return VNRViscosity(g, SchemeConfig(**options)).step(grid, dt)
