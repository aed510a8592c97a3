#!/usr/bin/env python3
"""
End-to-end runs at desk scale: conservation, entropy production, shock
capturing accuracy, convergence orders, artificial viscosity, splitting
and determinism
"""
import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add lib to path
project_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(project_root / "lib"))

from diagnostics import conserved_totals, convergence_order
from driver import convergence_study, density_error, evolve, reference_shock_positions, run_problem
from gas_thermo import GasModel, conservative_arrays
from grid import BoundaryCondition, Grid1D, Grid2D
from multid import strang_split_step
from problems import build, make_grid, riemann_solution
from schemes import SchemeConfig, all_schemes, cfl_dt, make_scheme

NAMES = [scheme.name() for scheme in all_schemes()]
AIR = GasModel(gamma=1.4)


@pytest.mark.parametrize("name", NAMES)
def test_mirrored_sod_totals_drift(name):
    spec = build("mirrored_sod").model_copy(update={"t_final": 0.5})
    scheme = make_scheme(spec.gas, SchemeConfig(scheme=name, cfl=0.3))
    grid = make_grid(spec, 400)
    before = conserved_totals(grid)
    final, _, _, report = evolve(scheme, grid, spec.t_final, max_steps=200)
    assert len(report.records) == 200
    after = conserved_totals(final)
    scale = np.maximum(np.abs(before), 1.0)
    assert np.all(np.abs(after - before) <= 1e-11 * scale)


@pytest.mark.parametrize("name", ["godunov", "lax_friedrichs"])
def test_shock_run_produces_entropy_every_step(name):
    result = run_problem(build("mirrored_sod"), SchemeConfig(scheme=name), 200)
    productions = [record.production for record in result.report.records]
    assert min(productions) >= -1e-10
    assert result.report.total_production > 0.0


def test_smooth_entropy_production_vanishes_under_refinement():
    spec = build("entropy_wave").model_copy(update={"t_final": 0.5})
    cfg = SchemeConfig(scheme="godunov")
    levels = []
    for n in (50, 100, 200):
        result = run_problem(spec, cfg, n)
        levels.append((spec.length / n, abs(result.report.total_production) / result.steps))
    assert levels[0][1] > levels[1][1] > levels[2][1] > 0.0
    assert convergence_order(levels).order >= 1.0


def test_sod_godunov_accuracy():
    spec = build("sod")
    result = run_problem(spec, SchemeConfig(scheme="godunov"), 400)
    assert density_error(result) < 0.01
    exact = 0.5 + 1.75216 * 0.2
    assert reference_shock_positions(spec, 0.2) == [pytest.approx(exact, abs=1e-5)]
    assert abs(max(result.report.shock_positions) - exact) <= 2.0 / 400


@pytest.mark.parametrize(
    "cfg, resolutions, low, high",
    [
        (SchemeConfig(scheme="lax_friedrichs"), [50, 100, 200, 400], 0.7, 1.1),
        (SchemeConfig(scheme="richtmyer"), [50, 100, 200, 400], 1.8, 2.2),
        (SchemeConfig(scheme="maccormack"), [50, 100, 200, 400], 1.8, 2.2),
        (SchemeConfig(scheme="muscl", limiter="minmod"), [50, 100, 200, 400], 1.8, 2.2),
        (SchemeConfig(scheme="muscl", limiter="van_leer"), [50, 100, 200, 400], 1.8, 2.2),
    ],
    ids=["lax_friedrichs", "richtmyer", "maccormack", "muscl_minmod", "muscl_van_leer"],
)
def test_entropy_wave_orders(cfg, resolutions, low, high):
    study = convergence_study(build("entropy_wave"), cfg, resolutions, workers=1)
    assert study.order.monotone
    assert low <= study.order.order <= high


def test_weno5_order_with_refined_time_step():
    cfg = SchemeConfig(scheme="weno5", dt_power=5.0 / 3.0)
    study = convergence_study(build("entropy_wave"), cfg, [50, 100, 200, 400], workers=1)
    assert study.order.order >= 4.0


def _post_shock_profile(result, spec):
    x = result.grid.x_centers
    rho = result.grid.u[0]
    rho_right = spec.initial.right.rho
    jump = riemann_solution(spec).rho_star_R - rho_right
    window = (x > 0.78) & (x < 0.9)
    overshoot = rho[(x > 0.75) & (x < 0.9)].max() - (rho_right + jump)
    inside = (rho[window] > rho_right + 0.1 * jump) & (rho[window] < rho_right + 0.9 * jump)
    return overshoot / jump, int(np.count_nonzero(inside))


def test_artificial_viscosity_smooths_the_shock():
    spec = build("sod")
    plain = run_problem(spec, SchemeConfig(scheme="richtmyer"), 400)
    viscous = run_problem(spec, SchemeConfig(scheme="vnr_viscosity", q_visc_coeff=2.0), 400)
    plain_overshoot, _ = _post_shock_profile(plain, spec)
    overshoot, width = _post_shock_profile(viscous, spec)
    assert plain_overshoot > 0.1
    assert overshoot <= 0.01
    assert 1 <= width <= 6


def test_y_independent_sod_matches_1d_rows():
    nx, ny = 200, 8
    x = (np.arange(nx) + 0.5) / nx
    rho = np.where(x < 0.5, 1.0, 0.125)
    p = np.where(x < 0.5, 1.0, 0.1)
    grid1 = Grid1D(conservative_arrays(AIR, rho, np.zeros((1, nx)), p), 1.0 / nx)
    u2 = conservative_arrays(
        AIR, np.broadcast_to(rho, (ny, nx)), np.zeros((2, ny, nx)), np.broadcast_to(p, (ny, nx))
    )
    grid2 = Grid2D(u2, 1.0 / nx, 1.0 / ny, BoundaryCondition.TRANSMISSIVE, BoundaryCondition.PERIODIC)

    cfg = SchemeConfig(scheme="godunov")
    scheme = make_scheme(AIR, cfg)
    t, step = 0.0, 0
    while t < 0.2:
        dt = min(cfl_dt(AIR, grid1, cfg), 0.2 - t)
        if step % 2 == 0:
            grid1 = scheme.step(scheme.step(grid1, 0.5 * dt, step), 0.5 * dt, step)
        else:
            grid1 = scheme.step(grid1, dt, step)
        grid2 = strang_split_step(AIR, grid2, dt, cfg, step)
        t += dt
        step += 1
    for j in range(ny):
        assert np.array_equal(grid2.u[[0, 1, 3], j, :], grid1.u)


def test_symmetric_quadrants_stay_symmetric():
    spec = build("quadrant_2d")
    scheme = make_scheme(spec.gas, SchemeConfig(scheme="godunov", split="symmetric"))
    grid = make_grid(spec, 32)
    final, _, _, report = evolve(scheme, grid, 1.0, max_steps=20)
    assert len(report.records) == 20
    assert np.allclose(final.transposed().u, final.u, rtol=0.0, atol=1e-10)


def test_studies_do_not_depend_on_workers():
    spec = build("entropy_wave").model_copy(update={"t_final": 0.25})
    cfg = SchemeConfig(scheme="muscl")
    sequential = convergence_study(spec, cfg, [32, 64, 128], workers=1)
    parallel = convergence_study(spec, cfg, [32, 64, 128], workers=os.cpu_count())
    assert sequential.errors == parallel.errors
    assert sequential.order.order == parallel.order.order
