#!/usr/bin/env python3
"""
Conserved totals, entropy production, error norms, convergence orders,
shock positions and the run report
"""
import csv
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add lib to path
project_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(project_root / "lib"))

from diagnostics import (
    RunReport,
    StepRecord,
    conserved_totals,
    convergence_order,
    entropy_production,
    entropy_total,
    error_norms,
    is_periodic,
    restrict,
    shock_locator,
)
from gas_thermo import GasMode, GasModel, conservative_arrays
from globals import GeometryMismatch, InsufficientData
from grid import BoundaryCondition, Grid1D, Grid2D
from schemes import step_godunov

AIR = GasModel(gamma=1.4)


def sod_grid(n=400, bc=BoundaryCondition.TRANSMISSIVE):
    x = (np.arange(n) + 0.5) / n
    rho = np.where(x < 0.5, 1.0, 0.125)
    p = np.where(x < 0.5, 1.0, 0.1)
    return Grid1D(conservative_arrays(AIR, rho, np.zeros((1, n)), p), 1.0 / n, bc)


def test_conserved_totals_sod():
    totals = conserved_totals(sod_grid())
    assert totals[0] == pytest.approx(0.5625, rel=1e-15)
    assert totals[1] == 0.0
    assert totals[2] == pytest.approx(1.375, rel=1e-15)


def test_conserved_totals_are_order_independent():
    rng = np.random.default_rng(2)
    u = conservative_arrays(AIR, 1.0 + rng.random(101), rng.standard_normal((1, 101)), 1.0 + rng.random(101))
    grid = Grid1D(u, 0.01)
    shuffled = Grid1D(u[:, rng.permutation(101)], 0.01)
    assert np.array_equal(conserved_totals(grid), conserved_totals(shuffled))


def test_conserved_totals_2d_use_cell_area():
    u = conservative_arrays(AIR, np.ones((4, 5)), np.zeros((2, 4, 5)), np.ones((4, 5)))
    totals = conserved_totals(Grid2D(u, 0.2, 0.25))
    assert totals[0] == pytest.approx(1.0, rel=1e-15)


def test_entropy_production_of_godunov_step():
    x = (np.arange(100) + 0.5) / 100
    inside = (x > 0.4) & (x < 0.6)
    rho = np.where(inside, 1.0, 0.125)
    p = np.where(inside, 1.0, 0.1)
    grid = Grid1D(conservative_arrays(AIR, rho, np.zeros((1, 100)), p), 0.01, BoundaryCondition.PERIODIC)
    assert is_periodic(grid)
    after = step_godunov(AIR, grid, 0.004)
    assert entropy_production(AIR, grid, after, 0.004) > 0.0
    assert entropy_production(AIR, grid, grid, 0.004) == 0.0


def test_entropy_production_checks_geometry():
    with pytest.raises(GeometryMismatch):
        entropy_production(AIR, sod_grid(400), sod_grid(200), 0.001)
    with pytest.raises(ValueError):
        entropy_production(AIR, sod_grid(), sod_grid(), 0.0)


def test_isentropic_entropy_is_minus_mechanical_energy():
    g = GasModel(gamma=2.0, mode=GasMode.ISENTROPIC)
    u = conservative_arrays(g, np.full(8, 2.0), np.full((1, 8), 1.0), None)
    # rho |v|^2 / 2 + kappa rho^gamma / (gamma - 1) = 1 + 4
    assert entropy_total(g, Grid1D(u, 0.125)) == pytest.approx(-5.0, rel=1e-15)


def test_error_norms():
    grid = sod_grid(100)
    norms = error_norms(grid, grid)
    assert np.all(norms.l1 == 0.0) and np.all(norms.linf == 0.0)
    shifted = grid.u.copy()
    shifted[0, :10] += 0.5
    l1, linf = error_norms(grid, shifted)
    assert l1[0] == pytest.approx(0.05, rel=1e-14)
    assert linf[0] == 0.5
    with pytest.raises(GeometryMismatch):
        error_norms(grid, sod_grid(50))


def test_convergence_order_synthetic():
    errors = [(dx, 3.0 * dx**2) for dx in (0.1, 0.05, 0.025, 0.0125)]
    order = convergence_order(errors)
    assert order.order == pytest.approx(2.0, abs=1e-12)
    assert order.monotone
    assert order.levels == 4
    assert float(convergence_order(list(reversed(errors)))) == pytest.approx(2.0, abs=1e-12)


def test_convergence_order_not_monotone():
    order = convergence_order([(0.1, 1e-2), (0.05, 2e-2), (0.025, 1e-3)])
    assert not order.monotone


def test_convergence_order_needs_three_levels():
    with pytest.raises(InsufficientData):
        convergence_order([(0.1, 1e-2), (0.05, 2.5e-3)])
    with pytest.raises(InsufficientData):
        convergence_order([(0.1, 1e-2), (0.05, 0.0), (0.025, 1e-4)])


def test_shock_locator():
    grid = sod_grid(400)
    assert shock_locator(grid) == [pytest.approx(0.5)]
    n = 40
    u = conservative_arrays(AIR, np.ones(n), np.zeros((1, n)), np.ones(n))
    assert shock_locator(Grid1D(u, 1.0 / n)) == []


def test_shock_locator_merges_neighbouring_faces():
    rho = np.array([1.0, 1.0, 1.0, 0.6, 0.3, 0.3, 0.3, 0.3])
    u = conservative_arrays(AIR, rho, np.zeros((1, 8)), np.ones(8))
    positions = shock_locator(Grid1D(u, 0.125))
    # faces at 0.375 and 0.5 are flagged
    assert positions == [pytest.approx(0.4375)]


def test_restrict():
    u = np.arange(12.0).reshape(2, 6)
    assert np.array_equal(restrict(u, 2), [[0.5, 2.5, 4.5], [6.5, 8.5, 10.5]])
    assert np.array_equal(restrict(u, 1), u)
    with pytest.raises(GeometryMismatch):
        restrict(u, 4)
    u2 = np.ones((3, 4, 4))
    assert restrict(u2, 2).shape == (3, 2, 2)


def _record(step, time, entropy=None, production=None):
    return StepRecord(step, time, 0.1, (1.0, 0.0, 2.5), entropy, production, 1.2)


def test_run_report(tmp_path):
    report = RunReport(("rho", "m_x", "E"), entropy_evaluated=True)
    report.add(_record(1, 0.1, 3.0, 0.25))
    report.add(_record(2, 0.2, 3.5, 0.5))
    assert report.total_production == 0.75
    with pytest.raises(ValueError):
        report.add(_record(3, 0.2))
    with pytest.raises(ValueError):
        report.add(StepRecord(3, 0.3, 0.1, (math.nan, 0.0, 1.0), None, None, 1.0))

    path = tmp_path / "report.csv"
    report.to_csv(path)
    with open(path) as stream:
        rows = list(csv.reader(stream))
    assert rows[0] == [
        "step", "time", "dt", "total_rho", "total_m_x", "total_E",
        "entropy", "entropy_production", "max_wave_speed",
    ]
    assert len(rows) == 3
    assert float(rows[2][7]) == 0.5


def test_run_report_without_entropy():
    report = RunReport(("rho", "m_x"), entropy_evaluated=False)
    report.add(StepRecord(1, 0.1, 0.1, (1.0, 0.0), None, None, 1.0))
    assert report.total_production is None
    row = next(report.rows())
    assert row[5:7] == ["not evaluated", "not evaluated"]
