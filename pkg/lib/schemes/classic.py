"""
Central schemes of the first generation:

    LaxFriedrichs   first order, F = (f_i + f_{i+1})/2 - dx/(2 dt) (u_{i+1} - u_i)
    Richtmyer       two-step Lax-Wendroff
    LaxWendroff     one-step Lax-Wendroff with the analytic flux Jacobian
    MacCormack      predictor/corrector, direction alternating with the step index
    VNRViscosity    Richtmyer with the von Neumann-Richtmyer artificial pressure

All of them are evaluated through their interface fluxes, so they are
conservative to round-off. LaxWendroff and MacCormack subtract a
pressure-switched dissipation from their fluxes (`scheme.pswitch`);
with `scheme.pswitch = 0` both abort on the Sod shock tube.
"""

import numpy as np

from euler_flux import flux_jacobian_apply, flux_normal
from gas_thermo import primitive_arrays, sound_speed_array
from grid import BoundaryCondition

from .scheme import Scheme, interior_pairs


class LaxFriedrichs(Scheme):
    _scheme_name = "lax_friedrichs"

    def _face_fluxes(self, padded, ghost, dx, dt, step_index):
        left, right = interior_pairs(padded, ghost)
        f_l = flux_normal(self.g, left)
        f_r = flux_normal(self.g, right)
        return 0.5 * (f_l + f_r) - (0.5 * dx / dt) * (right - left)


class Richtmyer(Scheme):
    _scheme_name = "richtmyer"
    _order = 2

    def _half_step(self, left, right, f_l, f_r, dx, dt):
        half = 0.5 * (left + right) - (0.5 * dt / dx) * (f_r - f_l)
        self._check(half, stage="predictor")
        return half

    def _face_fluxes(self, padded, ghost, dx, dt, step_index):
        left, right = interior_pairs(padded, ghost)
        half = self._half_step(
            left, right, flux_normal(self.g, left), flux_normal(self.g, right), dx, dt
        )
        return flux_normal(self.g, half)


def pressure_switch_dissipation(g, padded: np.ndarray, ghost: int, coeff: float) -> np.ndarray:
    """
    d_{i+1/2} = k max(nu_i, nu_{i+1}) max(|v| + c) (u_{i+1} - u_i),

        nu_i = |p_{i+1} - 2 p_i + p_{i-1}| / (p_{i+1} + 2 p_i + p_{i-1})

    for the faces of the interior cells; needs two ghost cells. The switch
    is of order dx^2 on smooth data and vanishes where the pressure is
    uniform or linear.
    """
    rho, vel, p = primitive_arrays(g, padded)
    n_faces = padded.shape[-1] - 2 * ghost + 1
    nu = np.abs(p[2:] - 2.0 * p[1:-1] + p[:-2]) / (p[2:] + 2.0 * p[1:-1] + p[:-2])
    speed = np.abs(vel[0]) + sound_speed_array(g, rho, p)
    # nu[j] belongs to padded cell j + 1
    nu_l = nu[ghost - 2 : ghost - 2 + n_faces]
    nu_r = nu[ghost - 1 : ghost - 1 + n_faces]
    lower = slice(ghost - 1, ghost - 1 + n_faces)
    upper = slice(ghost, ghost + n_faces)
    scale = coeff * np.maximum(nu_l, nu_r) * np.maximum(speed[lower], speed[upper])
    return scale * (padded[:, upper] - padded[:, lower])


class PressureSwitched(Scheme):
    """
    A central scheme with `pressure_switch_dissipation` subtracted from its
    fluxes; `SchemeConfig.switch_coeff = 0` leaves the plain scheme
    """

    _stencil = 2

    def _central_fluxes(self, padded, ghost, dx, dt, step_index):
        raise NotImplementedError

    def _face_fluxes(self, padded, ghost, dx, dt, step_index):
        fluxes = self._central_fluxes(padded, ghost, dx, dt, step_index)
        if self.cfg.switch_coeff > 0.0:
            fluxes = fluxes - pressure_switch_dissipation(self.g, padded, ghost, self.cfg.switch_coeff)
        return fluxes


class LaxWendroff(PressureSwitched):
    """
    F = (f_i + f_{i+1})/2 - dt/(2 dx) A(u_{i+1/2}) (f_{i+1} - f_i),
    A evaluated at the arithmetic mean of the two cells
    """

    _scheme_name = "lax_wendroff"
    _order = 2

    def _central_fluxes(self, padded, ghost, dx, dt, step_index):
        left, right = interior_pairs(padded, ghost)
        f_l = flux_normal(self.g, left)
        f_r = flux_normal(self.g, right)
        mean = 0.5 * (left + right)
        return 0.5 * (f_l + f_r) - (0.5 * dt / dx) * flux_jacobian_apply(self.g, mean, f_r - f_l)


class MacCormack(PressureSwitched):
    """
    Even steps: forward predictor, backward corrector; odd steps: the reverse.
    The flux form of the forward/backward variant is F_{i+1/2} = (f_{i+1} + f*_i)/2.

    The predicted ghost state at a reflective wall is not the mirror image
    of the predicted interior state, so the wall fluxes are set to those
    of a solid wall: normal momentum only.
    """

    _scheme_name = "maccormack"
    _order = 2

    def _central_fluxes(self, padded, ghost, dx, dt, step_index):
        f = flux_normal(self.g, padded)
        n_faces = padded.shape[-1] - 2 * ghost + 1
        lower = slice(ghost - 1, ghost - 1 + n_faces)
        upper = slice(ghost, ghost + n_faces)
        jump = f[:, upper] - f[:, lower]
        if step_index % 2 == 0:
            predicted = padded[:, lower] - (dt / dx) * jump
            self._check(predicted, stage="predictor")
            return 0.5 * (f[:, upper] + flux_normal(self.g, predicted))

        predicted = padded[:, upper] - (dt / dx) * jump
        self._check(predicted, stage="predictor")
        return 0.5 * (f[:, lower] + flux_normal(self.g, predicted))

    def face_fluxes(self, grid, dt, step_index=0):
        fluxes = super().face_fluxes(grid, dt, step_index)
        if grid.bc == BoundaryCondition.REFLECTIVE:
            others = [k for k in range(fluxes.shape[0]) if k != 1]
            fluxes[others, 0] = 0.0
            fluxes[others, -1] = 0.0
        return fluxes


def artificial_pressure(g, u: np.ndarray, quadratic: float, linear: float = 0.0) -> np.ndarray:
    """
    q_i = rho_i (C^2 dv_i^2 + C_l c_i |dv_i|),  dv_i = min(v_{i+1} - v_{i-1}, 0) / 2

    for the cells 1 .. n-2 of `u`; zero wherever the flow expands
    """
    rho, vel, p = primitive_arrays(g, u)
    v = vel[0]
    dv = 0.5 * np.minimum(v[2:] - v[:-2], 0.0)
    q = quadratic**2 * rho[1:-1] * dv * dv
    if linear:
        q = q - linear * rho[1:-1] * sound_speed_array(g, rho[1:-1], p[1:-1]) * dv
    return q


class VNRViscosity(Richtmyer):
    """
    Two-step Lax-Wendroff with the pressure replaced by p + q in the
    momentum and energy fluxes
    """

    _scheme_name = "vnr_viscosity"
    _stencil = 2
    _cfl_key = "scheme.cfl.vnr"
    _order = 1

    def _with_q(self, f, u, q):
        f = f.copy()
        f[1] = f[1] + q
        if not self.g.isentropic:
            f[-1] = f[-1] + q * u[1] / u[0]
        return f

    def _face_fluxes(self, padded, ghost, dx, dt, step_index):
        n_faces = padded.shape[-1] - 2 * ghost + 1
        q = artificial_pressure(self.g, padded, self.cfg.q_visc_coeff, self.cfg.q_linear_coeff)
        # q[j] belongs to padded cell j + 1
        cells = padded[:, ghost - 1 : ghost + n_faces]
        q_cells = q[ghost - 2 : ghost - 1 + n_faces]
        f = self._with_q(flux_normal(self.g, cells), cells, q_cells)

        left, right = cells[:, :-1], cells[:, 1:]
        half = self._half_step(left, right, f[:, :-1], f[:, 1:], dx, dt)
        q_face = 0.5 * (q_cells[:-1] + q_cells[1:])
        return self._with_q(flux_normal(self.g, half), half, q_face)
