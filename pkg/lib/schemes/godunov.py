"""
First-order Godunov schemes: the interface flux is the flux of the
(exact or approximate) Riemann solution between two neighbouring cells.
"""

from riemann import FluxKind, face_flux

from .scheme import Scheme, interior_pairs


class Godunov(Scheme):
    _scheme_name = "godunov"
    _flux_kind = FluxKind.EXACT

    def _face_fluxes(self, padded, ghost, dx, dt, step_index):
        left, right = interior_pairs(padded, ghost)
        return face_flux(self.g, self._flux_kind, left, right)


class GodunovHLL(Godunov):
    _scheme_name = "godunov_hll"
    _flux_kind = FluxKind.HLL


class GodunovRusanov(Godunov):
    _scheme_name = "godunov_rusanov"
    _flux_kind = FluxKind.RUSANOV
