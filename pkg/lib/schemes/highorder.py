"""
High-order finite-volume schemes: reconstructed interface states, an
interface flux from `riemann` (HLL unless configured otherwise), SSP-RK3
in time.

    MUSCL   limited piecewise-linear reconstruction of (rho, v, p)
    WENO5   component-wise WENO-JS reconstruction of the conserved variables
"""

import numpy as np

from gas_thermo import conservative_arrays, primitive_arrays
from riemann import face_flux

from .reconstruction import reconstruct_muscl, reconstruct_weno5
from .scheme import Scheme
from .timestep import ssp_rk3_step


class HighOrderScheme(Scheme):
    _cfl_key = "scheme.cfl.high_order"

    def _interface_states(self, padded, ghost):
        raise NotImplementedError

    def _face_fluxes(self, padded, ghost, dx, dt, step_index):
        left, right = self._interface_states(padded, ghost)
        self._check(left, stage="reconstruction")
        self._check(right, stage="reconstruction")
        return face_flux(self.g, self.cfg.flux, left, right)

    def operator(self, grid) -> np.ndarray:
        """
        L(u) = -(F_{i+1/2} - F_{i-1/2}) / dx
        """
        fluxes = self.face_fluxes(grid, 0.0)
        return -(fluxes[:, 1:] - fluxes[:, :-1]) / grid.dx

    def step(self, grid, dt, step_index=0):
        return ssp_rk3_step(self.g, grid, dt, self.operator)


class MUSCL(HighOrderScheme):
    _scheme_name = "muscl"
    _stencil = 2
    _order = 2

    def _interface_states(self, padded, ghost):
        rho, vel, p = primitive_arrays(self.g, padded)
        w = np.concatenate([rho[None], vel, p[None]], axis=0)
        left, right = reconstruct_muscl(w, self.cfg.limiter, ghost)
        dim = vel.shape[0]
        return (
            conservative_arrays(self.g, left[0], left[1 : dim + 1], left[-1]),
            conservative_arrays(self.g, right[0], right[1 : dim + 1], right[-1]),
        )


class WENO5(HighOrderScheme):
    _scheme_name = "weno5"
    _stencil = 3
    _order = 5

    def _interface_states(self, padded, ghost):
        return reconstruct_weno5(
            padded, ghost, eps=self.cfg.weno_eps, nonlinear=self.cfg.nonlinear_weights
        )
