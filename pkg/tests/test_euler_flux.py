#!/usr/bin/env python3
"""
Fluxes, characteristic speeds and the hyperbolicity check
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add lib to path
project_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(project_root / "lib"))

from euler_flux import (
    Direction,
    char_speeds,
    flux_euler,
    flux_isentropic,
    flux_jacobian,
    flux_normal,
    hyperbolicity_check,
    max_wave_speed,
    numeric_jacobian,
    rotate_state,
    rotation_to_axis,
)
from gas_thermo import ConsState, GasMode, GasModel, PrimState, cons_from_prim, conservative_arrays
from globals import InvalidState, ModeError
from grid import Grid1D

AIR = GasModel(gamma=1.4)
ISENTROPIC = GasModel(gamma=2.0, kappa0=1.0, mode=GasMode.ISENTROPIC)
E1 = Direction.axis(1)


def _state(g, rho, v, p=1.0):
    return cons_from_prim(g, PrimState(rho, v, p))


def test_direction_must_be_unit():
    with pytest.raises(ValueError):
        Direction((1.0, 1.0))
    assert Direction.from_angle(0.3).dim == 2


def test_flux_euler_examples():
    assert np.allclose(flux_euler(AIR, _state(AIR, 1.0, (0.0,)), E1), [0.0, 1.0, 0.0])
    assert np.allclose(flux_euler(AIR, _state(AIR, 1.0, (1.0,)), E1), [1.0, 2.0, 4.0])
    f = flux_euler(AIR, _state(AIR, 0.7, (0.0, 0.0), 2.0), Direction.from_angle(1.0))
    assert f[0] == 0.0 and f[3] == 0.0


def test_flux_isentropic_examples():
    assert np.allclose(flux_isentropic(ISENTROPIC, _state(ISENTROPIC, 1.0, (0.0,)), E1), [0.0, 1.0])
    assert np.allclose(flux_isentropic(ISENTROPIC, _state(ISENTROPIC, 1.0, (1.0,)), E1), [1.0, 2.0])
    forward = flux_isentropic(ISENTROPIC, _state(ISENTROPIC, 1.0, (0.4,)), E1)
    backward = flux_isentropic(ISENTROPIC, _state(ISENTROPIC, 1.0, (-0.4,)), E1)
    assert forward[0] == -backward[0]
    with pytest.raises(ModeError):
        flux_isentropic(AIR, _state(AIR, 1.0, (0.0,)), E1)


def test_char_speeds_examples():
    c = math.sqrt(1.4)
    assert np.allclose(char_speeds(AIR, _state(AIR, 1.0, (0.0,)), E1), [-c, 0.0, c])
    assert np.allclose(char_speeds(AIR, _state(AIR, 1.0, (2.0,)), E1), [2.0 - c, 2.0, 2.0 + c])
    assert len(char_speeds(ISENTROPIC, _state(ISENTROPIC, 1.0, (0.0, 0.0)), Direction.axis(2))) == 3
    base = char_speeds(AIR, _state(AIR, 0.5, (0.1,), 0.3), E1)
    shifted = char_speeds(AIR, _state(AIR, 0.5, (0.8,), 0.3), E1)
    assert np.allclose(np.array(shifted) - np.array(base), 0.7)


def test_hyperbolicity_examples():
    report = hyperbolicity_check(AIR, _state(AIR, 1.0, (0.0,)), E1)
    assert report.real
    assert report.numeric[0] == pytest.approx(-report.numeric[-1], abs=1e-6)
    report = hyperbolicity_check(ISENTROPIC, _state(ISENTROPIC, 1.3, (0.2,)), E1)
    assert report.n_eigenvalues == 2


def _random_state(rng, g, dim):
    rho = 10.0 ** rng.uniform(-1, 1)
    p = 10.0 ** rng.uniform(-1, 1)
    v = tuple(rng.uniform(-3, 3, size=dim))
    return cons_from_prim(g, PrimState(rho, v, p))


@pytest.mark.parametrize("g", [AIR, ISENTROPIC], ids=["full", "isentropic"])
@pytest.mark.parametrize("dim", [1, 2])
def test_hyperbolicity_random_states(g, dim):
    rng = np.random.default_rng(11 + dim)
    for _ in range(250):
        u = _random_state(rng, g, dim)
        direction = Direction.axis(1) if dim == 1 else Direction.from_angle(rng.uniform(0, 2 * math.pi))
        report = hyperbolicity_check(g, u, direction)
        assert report.real
        assert report.max_mismatch <= 1e-5 * report.scale


def test_analytic_jacobian_matches_finite_differences():
    rng = np.random.default_rng(5)
    for g in (AIR, ISENTROPIC):
        for dim in (1, 2):
            u = _random_state(rng, g, dim)
            analytic = flux_jacobian(g, u)
            numeric = numeric_jacobian(g, u, Direction.axis(dim))
            assert np.allclose(analytic, numeric, rtol=1e-6, atol=1e-6)


def test_rotational_invariance():
    rng = np.random.default_rng(9)
    for _ in range(100):
        u = _random_state(rng, AIR, 2)
        direction = Direction.from_angle(rng.uniform(0, 2 * math.pi))
        rotation = rotation_to_axis(direction)
        f = flux_euler(AIR, u, direction)
        f_rot = flux_euler(AIR, rotate_state(u, rotation), Direction.axis(2))
        back = f_rot.copy()
        back[1:3] = rotation.T @ f_rot[1:3]
        assert np.allclose(back, f, rtol=1e-12, atol=1e-12)


def test_flux_normal_matches_state_flux():
    u = _state(AIR, 0.6, (0.4, -0.3), 1.3)
    f = flux_normal(AIR, u.vector()[:, None])[:, 0]
    assert np.allclose(f, flux_euler(AIR, u, Direction.axis(2)), rtol=1e-14)


def _uniform(rho, u, p, n=8):
    return Grid1D(conservative_arrays(AIR, np.full(n, rho), np.full((1, n), u), np.full(n, p)), 0.1)


def test_max_wave_speed():
    assert max_wave_speed(AIR, _uniform(1.0, 0.0, 1.0)) == pytest.approx(1.1832159566)
    assert max_wave_speed(AIR, _uniform(1.0, 2.0, 1.0)) == pytest.approx(3.1832159566)
    grid = _uniform(1.0, 0.0, 1.0)
    u = grid.u.copy()
    u[:, 3] = _state(AIR, 1.0, (3.0,)).vector()
    assert max_wave_speed(AIR, grid.with_cells(u)) > max_wave_speed(AIR, grid)
    u[0, 5] = -1.0
    with pytest.raises(InvalidState):
        max_wave_speed(AIR, grid.with_cells(u))
