"""
Riemann problems of one-dimensional gas dynamics.

The exact solver works on arrays of interface states so that a Godunov
step evaluates all its faces in one call; `solve_exact`/`sample` are the
single-problem front end. The star pressure solves

    f_L(p) + f_R(p) + u_R - u_L = 0

by Newton iteration started from the two-rarefaction guess, with a
bracketing fallback (scipy.optimize.bisect) for faces where Newton fails.
A wave is a shock iff the star pressure exceeds the pressure next to it.

For the isentropic system the rarefaction branch and the fans are those
of the polytropic gas, and the shock branch follows the isentropic
Hugoniot curve

    f_K(p) = sqrt((p - p_K)(rho(p) - rho_K) / (rho(p) rho_K)),   rho(p) = (p/kappa0)^(1/gamma).

Configuration parameters:

    riemann.tolerance
    riemann.max_iter
    riemann.pressure_floor
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Tuple

import numpy as np
from scipy.optimize import bisect

from config import CONFIG
from euler_flux import Direction, StateVec, flux, flux_normal, normal_wave_speeds
from gas_thermo import (
    ConsState,
    GasMode,
    GasModel,
    PrimState,
    entropy_S,
    momentum_square,
    prim_from_cons,
    primitive_arrays,
)
from globals import NoConvergence, NotADiscontinuity, VacuumFormation

ISENTROPIC_SHOCK_THRESHOLD = 1e-12


class WaveKind(str, Enum):
    SHOCK = "shock"
    RAREFACTION = "rarefaction"


class FluxKind(str, Enum):
    EXACT = "exact"
    HLL = "hll"
    RUSANOV = "rusanov"


class _Star(NamedTuple):
    p: np.ndarray
    u: np.ndarray
    rho_l: np.ndarray
    rho_r: np.ndarray
    shock_l: np.ndarray
    shock_r: np.ndarray
    head_l: np.ndarray
    tail_l: np.ndarray
    tail_r: np.ndarray
    head_r: np.ndarray


@dataclass(frozen=True)
class RiemannSolution:
    """
    Two nonlinear waves separated by the contact moving with `u_star`.
    `left_speeds` is (head, tail) of the left wave, `right_speeds` is
    (tail, head) of the right wave; both coincide for a shock, so that

        left_speeds[0] <= left_speeds[1] <= u_star <= right_speeds[0] <= right_speeds[1]
    """

    left_wave: WaveKind
    right_wave: WaveKind
    p_star: float
    u_star: float
    rho_star_L: float
    rho_star_R: float
    left_speeds: Tuple[float, float]
    right_speeds: Tuple[float, float]
    mode: GasMode = GasMode.FULL_EULER

    @property
    def contact_speed(self) -> float:
        return self.u_star

    def _star(self) -> _Star:
        return _Star(
            p=np.array([self.p_star]),
            u=np.array([self.u_star]),
            rho_l=np.array([self.rho_star_L]),
            rho_r=np.array([self.rho_star_R]),
            shock_l=np.array([self.left_wave == WaveKind.SHOCK]),
            shock_r=np.array([self.right_wave == WaveKind.SHOCK]),
            head_l=np.array([self.left_speeds[0]]),
            tail_l=np.array([self.left_speeds[1]]),
            tail_r=np.array([self.right_speeds[0]]),
            head_r=np.array([self.right_speeds[1]]),
        )


def _wave_curve(g: GasModel, p, rho_k, p_k, c_k):
    """
    Return (f_K(p), f_K'(p)) of one side
    """
    gamma = g.gamma
    ratio = p / p_k
    f_rare = 2.0 * c_k / (gamma - 1.0) * (ratio ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
    df_rare = ratio ** (-(gamma + 1.0) / (2.0 * gamma)) / (rho_k * c_k)

    if g.isentropic:
        shock = p > p_k * (1.0 + ISENTROPIC_SHOCK_THRESHOLD)
        rho = (p / g.kappa0) ** (1.0 / gamma)
        jump = rho - rho_k
        f_shock = np.sqrt((p - p_k) * jump / (rho * rho_k))
        df_shock = (jump / (rho * rho_k) + (p - p_k) / (gamma * p * rho)) / (2.0 * f_shock)
    else:
        shock = p > p_k
        a_k = 2.0 / ((gamma + 1.0) * rho_k)
        b_k = (gamma - 1.0) / (gamma + 1.0) * p_k
        root = np.sqrt(a_k / (p + b_k))
        f_shock = (p - p_k) * root
        df_shock = root * (1.0 - 0.5 * (p - p_k) / (b_k + p))

    return np.where(shock, f_shock, f_rare), np.where(shock, df_shock, df_rare)


def _is_shock(g: GasModel, p_star, p_k):
    if g.isentropic:
        return p_star > p_k * (1.0 + ISENTROPIC_SHOCK_THRESHOLD)
    return p_star > p_k


def _bisect_pressure(g: GasModel, face, rho_l, u_l, p_l, c_l, rho_r, u_r, p_r, c_r, tol):
    du = u_r - u_l

    def phi(p):
        f_l, _ = _wave_curve(g, np.float64(p), rho_l, p_l, c_l)
        f_r, _ = _wave_curve(g, np.float64(p), rho_r, p_r, c_r)
        return float(f_l + f_r + du)

    low = 1e-14 * min(p_l, p_r)
    high = max(p_l, p_r)
    try:
        with np.errstate(all="ignore"):
            for _ in range(200):
                if phi(high) > 0.0:
                    break
                high *= 2.0
            return bisect(phi, low, high, rtol=max(tol, 4.0 * np.finfo(float).eps), maxiter=1000)
    except (ValueError, RuntimeError) as exc:
        raise NoConvergence("star pressure not found: %s" % exc, face=face)


def _solve_star(g: GasModel, rho_l, u_l, p_l, rho_r, u_r, p_r) -> _Star:
    gamma = g.gamma
    tol = CONFIG["riemann.tolerance"]
    max_iter = CONFIG["riemann.max_iter"]

    c_l = np.sqrt(gamma * p_l / rho_l)
    c_r = np.sqrt(gamma * p_r / rho_r)
    du = u_r - u_l

    vacuum = du >= 2.0 * (c_l + c_r) / (gamma - 1.0)
    if vacuum.any():
        face = int(np.argmax(vacuum))
        raise VacuumFormation(
            "Riemann data generate vacuum",
            face=face,
            du=float(du[face]),
            bound=float(2.0 * (c_l[face] + c_r[face]) / (gamma - 1.0)),
        )

    z = (gamma - 1.0) / (2.0 * gamma)
    p_guess = (
        (c_l + c_r - 0.5 * (gamma - 1.0) * du) / (c_l / p_l**z + c_r / p_r**z)
    ) ** (1.0 / z)
    p = np.maximum(CONFIG["riemann.pressure_floor"], p_guess)

    active = np.ones(p.shape, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(max_iter):
            f_l, df_l = _wave_curve(g, p, rho_l, p_l, c_l)
            f_r, df_r = _wave_curve(g, p, rho_r, p_r, c_r)
            p_new = p - (f_l + f_r + du) / (df_l + df_r)
            p_new = np.where(p_new > 0.0, p_new, 0.5 * p)
            change = 2.0 * np.abs(p_new - p) / (p_new + p)
            p = np.where(active, p_new, p)
            active &= ~(change < tol)
            if not active.any():
                break

    failed = np.flatnonzero(active | ~np.isfinite(p))
    if failed.size:
        logging.info("riemann: Newton failed on %d faces, bisection fallback", failed.size)
        p = p.copy()
        for face in failed:
            p[face] = _bisect_pressure(
                g, int(face),
                rho_l[face], u_l[face], p_l[face], c_l[face],
                rho_r[face], u_r[face], p_r[face], c_r[face],
                tol,
            )

    with np.errstate(all="ignore"):
        f_l, _ = _wave_curve(g, p, rho_l, p_l, c_l)
        f_r, _ = _wave_curve(g, p, rho_r, p_r, c_r)
        u = 0.5 * (u_l + u_r) + 0.5 * (f_r - f_l)
        shock_l = _is_shock(g, p, p_l)
        shock_r = _is_shock(g, p, p_r)

        if g.isentropic:
            rho_star = (p / g.kappa0) ** (1.0 / gamma)
            rho_sl = rho_sr = rho_star
            secant_l = np.where(
                np.abs(rho_sl - rho_l) > 1e-8 * rho_l, (p - p_l) / (rho_sl - rho_l), c_l * c_l
            )
            secant_r = np.where(
                np.abs(rho_sr - rho_r) > 1e-8 * rho_r, (p - p_r) / (rho_sr - rho_r), c_r * c_r
            )
            s_l = u_l - np.sqrt(rho_sl / rho_l * secant_l)
            s_r = u_r + np.sqrt(rho_sr / rho_r * secant_r)
            rare_l = rare_r = rho_star
        else:
            mu = (gamma - 1.0) / (gamma + 1.0)
            r_l = p / p_l
            r_r = p / p_r
            rho_sl = rho_l * (r_l + mu) / (mu * r_l + 1.0)
            rho_sr = rho_r * (r_r + mu) / (mu * r_r + 1.0)
            q_l = np.sqrt((gamma + 1.0) / (2.0 * gamma) * r_l + (gamma - 1.0) / (2.0 * gamma))
            q_r = np.sqrt((gamma + 1.0) / (2.0 * gamma) * r_r + (gamma - 1.0) / (2.0 * gamma))
            s_l = u_l - c_l * q_l
            s_r = u_r + c_r * q_r
            rare_l = rho_l * r_l ** (1.0 / gamma)
            rare_r = rho_r * r_r ** (1.0 / gamma)

        tail_l = u - c_l * (p / p_l) ** z
        tail_r = u + c_r * (p / p_r) ** z

    return _Star(
        p=p,
        u=u,
        rho_l=np.where(shock_l, rho_sl, rare_l),
        rho_r=np.where(shock_r, rho_sr, rare_r),
        shock_l=shock_l,
        shock_r=shock_r,
        head_l=np.where(shock_l, s_l, u_l - c_l),
        tail_l=np.where(shock_l, s_l, tail_l),
        tail_r=np.where(shock_r, s_r, tail_r),
        head_r=np.where(shock_r, s_r, u_r + c_r),
    )


def _sample_arrays(g: GasModel, star: _Star, rho_l, u_l, p_l, rho_r, u_r, p_r, xi):
    """
    Self-similar solution at x/t = xi; returns (rho, u, p, left_of_contact)
    """
    gamma = g.gamma
    c_l = np.sqrt(gamma * p_l / rho_l)
    c_r = np.sqrt(gamma * p_r / rho_r)
    xi = np.broadcast_to(np.asarray(xi, dtype=float), star.p.shape)

    with np.errstate(all="ignore"):
        c_fan_l = 2.0 / (gamma + 1.0) * (c_l + 0.5 * (gamma - 1.0) * (u_l - xi))
        u_fan_l = 2.0 / (gamma + 1.0) * (c_l + 0.5 * (gamma - 1.0) * u_l + xi)
        rho_fan_l = rho_l * (c_fan_l / c_l) ** (2.0 / (gamma - 1.0))
        p_fan_l = p_l * (c_fan_l / c_l) ** (2.0 * gamma / (gamma - 1.0))

        c_fan_r = 2.0 / (gamma + 1.0) * (c_r - 0.5 * (gamma - 1.0) * (u_r - xi))
        u_fan_r = 2.0 / (gamma + 1.0) * (-c_r + 0.5 * (gamma - 1.0) * u_r + xi)
        rho_fan_r = rho_r * (c_fan_r / c_r) ** (2.0 / (gamma - 1.0))
        p_fan_r = p_r * (c_fan_r / c_r) ** (2.0 * gamma / (gamma - 1.0))

    left = xi <= star.u
    conditions = [
        left & (xi <= star.head_l),
        left & (xi > star.tail_l),
        left,
        ~left & (xi >= star.head_r),
        ~left & (xi < star.tail_r),
    ]

    def pick(outer_l, star_l, fan_l, outer_r, star_r, fan_r):
        return np.select(conditions, [outer_l, star_l, fan_l, outer_r, star_r], default=fan_r)

    rho = pick(rho_l, star.rho_l, rho_fan_l, rho_r, star.rho_r, rho_fan_r)
    u = pick(u_l, star.u, u_fan_l, u_r, star.u, u_fan_r)
    p = pick(p_l, star.p, p_fan_l, p_r, star.p, p_fan_r)
    return rho, u, p, left


def _prim_columns(w: PrimState):
    return np.array([w.rho]), np.array([w.u]), np.array([w.p])


def solve_exact(g: GasModel, wL: PrimState, wR: PrimState) -> RiemannSolution:
    """
    Exact solution of the Riemann problem along the first axis;
    further velocity components are passive
    """
    rho_l, u_l, p_l = _prim_columns(wL)
    rho_r, u_r, p_r = _prim_columns(wR)
    star = _solve_star(g, rho_l, u_l, p_l, rho_r, u_r, p_r)
    return RiemannSolution(
        left_wave=WaveKind.SHOCK if star.shock_l[0] else WaveKind.RAREFACTION,
        right_wave=WaveKind.SHOCK if star.shock_r[0] else WaveKind.RAREFACTION,
        p_star=float(star.p[0]),
        u_star=float(star.u[0]),
        rho_star_L=float(star.rho_l[0]),
        rho_star_R=float(star.rho_r[0]),
        left_speeds=(float(star.head_l[0]), float(star.tail_l[0])),
        right_speeds=(float(star.tail_r[0]), float(star.head_r[0])),
        mode=g.mode,
    )


def sample(sol: RiemannSolution, g: GasModel, wL: PrimState, wR: PrimState, speed: float) -> PrimState:
    rho_l, u_l, p_l = _prim_columns(wL)
    rho_r, u_r, p_r = _prim_columns(wR)
    rho, u, p, left = _sample_arrays(g, sol._star(), rho_l, u_l, p_l, rho_r, u_r, p_r, speed)
    transverse = wL.v[1:] if left[0] else wR.v[1:]
    if g.isentropic:
        p = g.kappa0 * rho**g.gamma
    return PrimState(float(rho[0]), (float(u[0]),) + tuple(transverse), float(p[0]))


def sample_many(sol: RiemannSolution, g: GasModel, wL: PrimState, wR: PrimState, speeds):
    """
    Vectorized `sample`: return (rho, u, p, left_of_contact) arrays for the rays `speeds`
    """
    speeds = np.asarray(speeds, dtype=float)
    star = _Star(*(np.broadcast_to(x, speeds.shape) for x in sol._star()))
    rho, u, p, left = _sample_arrays(
        g, star, wL.rho, wL.u, wL.p, wR.rho, wR.u, wR.p, speeds
    )
    if g.isentropic:
        p = g.kappa0 * rho**g.gamma
    return rho, u, p, left


def pressure_function(g: GasModel, p: float, wL: PrimState, wR: PrimState) -> float:
    """
    f_L(p) + f_R(p) + u_R - u_L
    """
    c_l = np.sqrt(g.gamma * wL.p / wL.rho)
    c_r = np.sqrt(g.gamma * wR.p / wR.rho)
    with np.errstate(all="ignore"):
        f_l, _ = _wave_curve(g, np.float64(p), wL.rho, wL.p, c_l)
        f_r, _ = _wave_curve(g, np.float64(p), wR.rho, wR.p, c_r)
    return float(f_l + f_r + wR.u - wL.u)


#
# interface fluxes on (m, n_faces) arrays of left and right states
#


def _flux_from_primitive(g: GasModel, rho, vel, p) -> np.ndarray:
    un = vel[0]
    out = [rho * un]
    out.append(rho * un * un + p)
    for t in range(1, vel.shape[0]):
        out.append(rho * un * vel[t])
    if not g.isentropic:
        rho_e = p / (g.gamma - 1.0) + 0.5 * rho * momentum_square(vel)
        out.append(un * (rho_e + p))
    return np.array(out)


def godunov_flux(g: GasModel, u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
    """
    Flux of the exact Riemann solution sampled at x/t = 0
    """
    rho_l, vel_l, p_l = primitive_arrays(g, u_left)
    rho_r, vel_r, p_r = primitive_arrays(g, u_right)
    star = _solve_star(g, rho_l, vel_l[0], p_l, rho_r, vel_r[0], p_r)
    rho, un, p, left = _sample_arrays(g, star, rho_l, vel_l[0], p_l, rho_r, vel_r[0], p_r, 0.0)
    if g.isentropic:
        p = g.kappa0 * rho**g.gamma
    vel = np.where(left, vel_l, vel_r)
    vel[0] = un
    return _flux_from_primitive(g, rho, vel, p)


def hll_flux_arrays(g: GasModel, u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
    un_l, c_l = normal_wave_speeds(g, u_left)
    un_r, c_r = normal_wave_speeds(g, u_right)
    s_l = np.minimum(un_l - c_l, un_r - c_r)
    s_r = np.maximum(un_l + c_l, un_r + c_r)
    f_l = flux_normal(g, u_left)
    f_r = flux_normal(g, u_right)
    middle = (s_r * f_l - s_l * f_r + s_l * s_r * (u_right - u_left)) / (s_r - s_l)
    return np.where(s_l >= 0.0, f_l, np.where(s_r <= 0.0, f_r, middle))


def rusanov_flux_arrays(g: GasModel, u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
    un_l, c_l = normal_wave_speeds(g, u_left)
    un_r, c_r = normal_wave_speeds(g, u_right)
    speed = np.maximum(np.abs(un_l) + c_l, np.abs(un_r) + c_r)
    f_l = flux_normal(g, u_left)
    f_r = flux_normal(g, u_right)
    return 0.5 * (f_l + f_r) - 0.5 * speed * (u_right - u_left)


FACE_FLUXES = {
    FluxKind.EXACT: godunov_flux,
    FluxKind.HLL: hll_flux_arrays,
    FluxKind.RUSANOV: rusanov_flux_arrays,
}


def face_flux(g: GasModel, kind: FluxKind, u_left: np.ndarray, u_right: np.ndarray) -> np.ndarray:
    return FACE_FLUXES[FluxKind(kind)](g, u_left, u_right)


def _state_pair_flux(function, g: GasModel, uL: ConsState, uR: ConsState) -> StateVec:
    prim_from_cons(g, uL)
    prim_from_cons(g, uR)
    return function(g, uL.vector()[:, None], uR.vector()[:, None])[:, 0]


def hll_flux(g: GasModel, uL: ConsState, uR: ConsState) -> StateVec:
    """
    Two-wave HLL flux along the first axis
    """
    return _state_pair_flux(hll_flux_arrays, g, uL, uR)


def rusanov_flux(g: GasModel, uL: ConsState, uR: ConsState) -> StateVec:
    return _state_pair_flux(rusanov_flux_arrays, g, uL, uR)


def exact_flux(g: GasModel, uL: ConsState, uR: ConsState) -> StateVec:
    return _state_pair_flux(godunov_flux, g, uL, uR)


#
# jump conditions
#


def rankine_hugoniot_residual(g: GasModel, s: float, uL: ConsState, uR: ConsState) -> StateVec:
    """
    f(uR) - f(uL) - s (uR - uL) along the first axis
    """
    direction = Direction.axis(uL.dim)
    return flux(g, uR, direction) - flux(g, uL, direction) - s * (uR.vector() - uL.vector())


def entropy_pair(g: GasModel, u: ConsState) -> Tuple[float, float]:
    """
    (density, flux) of the entropy whose production must be nonnegative:
    (rho S, m S) for the full system, minus the mechanical energy and its
    flux for the isentropic system
    """
    w = prim_from_cons(g, u)
    if g.isentropic:
        mech = 0.5 * w.rho * sum(x * x for x in w.v) + g.kappa0 * w.rho**g.gamma / (g.gamma - 1.0)
        return -mech, -w.u * (mech + w.p)
    entropy = entropy_S(g, w)
    return w.rho * entropy, u.m[0] * entropy


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    production: float
    residual: float

    def __bool__(self):
        return self.admissible


def entropy_admissible(
    g: GasModel, s: float, uL: ConsState, uR: ConsState, rh_tol: float = 1e-8
) -> AdmissibilityVerdict:
    """
    Decide whether the jump (s, uL, uR) is a physical discontinuity.
    The production [q] - s [eta] must not be negative beyond 1e-12.
    """
    residual = rankine_hugoniot_residual(g, s, uL, uR)
    direction = Direction.axis(uL.dim)
    scale = max(
        1.0,
        float(np.max(np.abs(flux(g, uL, direction)))),
        float(np.max(np.abs(flux(g, uR, direction)))),
        abs(s) * float(max(np.max(np.abs(uL.vector())), np.max(np.abs(uR.vector())))),
    )
    worst = float(np.max(np.abs(residual)))
    if worst > rh_tol * scale:
        raise NotADiscontinuity(
            "jump violates the Rankine-Hugoniot conditions", residual=worst, speed=s
        )
    eta_l, q_l = entropy_pair(g, uL)
    eta_r, q_r = entropy_pair(g, uR)
    production = (q_r - q_l) - s * (eta_r - eta_l)
    return AdmissibilityVerdict(production >= -1e-12, float(production), worst)
