"""
Time step control and time integration.

Configuration parameters:

    scheme.cfl.*   (through SchemeConfig.effective_cfl)
"""

from typing import Callable, Optional

import numpy as np

from euler_flux import max_wave_speed
from gas_thermo import GasModel, validate_cells
from globals import InvalidState

from .scheme import SchemeConfig

SpatialOperator = Callable[[object], np.ndarray]


def cfl_dt(g: GasModel, grid, cfg: SchemeConfig, dx_reference: Optional[float] = None) -> float:
    """
    dt = cfl dx / max wave speed.

    For a 2D grid the smaller of the two axis limits is taken. With
    `cfg.dt_power` p > 1 the step is further scaled by (dx/dx_reference)^(p-1),
    so that dt is proportional to dx^p along a refinement sequence.
    """
    speed = max_wave_speed(g, grid)
    if not speed > 0.0:
        raise InvalidState("maximal wave speed is not positive", speed=speed)
    dx = grid.dx if not hasattr(grid, "dy") else min(grid.dx, grid.dy)
    dt = cfg.effective_cfl() * dx / speed
    if cfg.dt_power != 1.0 and dx_reference is not None:
        dt *= (dx / dx_reference) ** (cfg.dt_power - 1.0)
    return dt


def forward_euler(g: GasModel, grid, dt: float, operator: SpatialOperator, stage=None):
    u = grid.u + dt * operator(grid)
    try:
        validate_cells(g, u)
    except InvalidState as exc:
        raise exc.annotate(stage=stage)
    return grid.with_cells(u)


def ssp_rk3_step(g: GasModel, grid, dt: float, spatial_operator: SpatialOperator):
    """
    Three-stage strong-stability-preserving Runge-Kutta step:

        u1 = u + dt L(u)
        u2 = 3/4 u + 1/4 (u1 + dt L(u1))
        u3 = 1/3 u + 2/3 (u2 + dt L(u2))
    """
    u0 = grid.u
    stage1 = forward_euler(g, grid, dt, spatial_operator, stage=1)
    stage2 = forward_euler(g, stage1, dt, spatial_operator, stage=2)
    u2 = 0.75 * u0 + 0.25 * stage2.u
    stage2 = grid.with_cells(u2)
    stage3 = forward_euler(g, stage2, dt, spatial_operator, stage=3)
    u3 = u0 / 3.0 + (2.0 / 3.0) * stage3.u
    try:
        validate_cells(g, u3)
    except InvalidState as exc:
        raise exc.annotate(stage=3)
    return grid.with_cells(u3)
