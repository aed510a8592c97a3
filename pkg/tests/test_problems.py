#!/usr/bin/env python3
"""
Problem catalog, initial grids and reference solutions
"""
import copy
import json
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add lib to path
project_root = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(project_root / "lib"))

from gas_thermo import PrimState, cons_from_prim, primitive_arrays
from globals import ConfigError, NoReference, UnknownProblem
from grid import BoundaryCondition, Grid1D, Grid2D
from problems import (
    ProblemRegistry,
    ReferenceKind,
    build,
    get_problem_registry,
    initial_cells,
    make_grid,
    problem_from_dict,
    reference_grid,
    reset_problem_registry,
    riemann_solution,
    sample_reference,
)
from riemann import WaveKind, rankine_hugoniot_residual

CATALOG = project_root / "etc" / "problems.json"
SCHEMA = project_root / "etc" / "problems.schema.json"


def setup_function():
    reset_problem_registry()


def test_catalog_names():
    assert get_problem_registry().names() == [
        "double_rarefaction",
        "entropy_wave",
        "isentropic_sod",
        "lax",
        "mirrored_sod",
        "quadrant_2d",
        "sod",
        "vortex_sheet",
    ]


def test_unknown_problem():
    with pytest.raises(UnknownProblem) as info:
        build("shu_osher")
    assert "sod" in str(info.value)


def test_sod_entry():
    spec = build("sod")
    assert spec.t_final == 0.2
    assert spec.gas.gamma == 1.4
    assert spec.reference == ReferenceKind.EXACT_RIEMANN
    assert spec.initial.left.prim(spec.gas) == PrimState(1.0, (0.0,), 1.0)
    assert spec.initial.right.prim(spec.gas) == PrimState(0.125, (0.0,), 0.1)


def test_catalog_entries():
    lax = build("lax")
    assert lax.t_final == 0.13
    assert lax.initial.left.v == [0.698]
    assert build("double_rarefaction").initial.right.v == [2.0]
    assert build("quadrant_2d").dimension == 2
    assert build("quadrant_2d").reference == ReferenceKind.SELF_CONVERGENCE
    iso = build("isentropic_sod")
    assert iso.gas.isentropic
    assert iso.initial.right.prim(iso.gas).p == 0.25
    assert build("entropy_wave").bc == [BoundaryCondition.PERIODIC]


def test_riemann_entries_have_consistent_references():
    for name in ("sod", "lax", "double_rarefaction"):
        spec = build(name)
        sol = riemann_solution(spec)
        assert sol.p_star > 0.0
        for wave, side, star_rho, speeds in (
            (sol.left_wave, spec.initial.left, sol.rho_star_L, sol.left_speeds),
            (sol.right_wave, spec.initial.right, sol.rho_star_R, sol.right_speeds),
        ):
            if wave != WaveKind.SHOCK:
                continue
            outer = cons_from_prim(spec.gas, side.prim(spec.gas))
            star = cons_from_prim(spec.gas, PrimState(star_rho, (sol.u_star,), sol.p_star))
            residual = rankine_hugoniot_residual(spec.gas, speeds[0], outer, star)
            assert np.max(np.abs(residual)) <= 1e-9


def test_double_rarefaction_is_two_rarefactions():
    sol = riemann_solution(build("double_rarefaction"))
    assert sol.left_wave == WaveKind.RAREFACTION
    assert sol.right_wave == WaveKind.RAREFACTION
    assert sol.u_star == pytest.approx(0.0, abs=1e-12)


def test_initial_cells_sod():
    spec = build("sod")
    u = initial_cells(spec, 10)
    assert u.shape == (3, 10)
    assert np.array_equal(u[0], [1.0] * 5 + [0.125] * 5)
    u = initial_cells(spec, 5)
    # the interface cuts cell 2 in half
    assert u[0, 2] == pytest.approx(0.5625)


def test_initial_cells_entropy_wave_are_averages():
    spec = build("entropy_wave")
    u = initial_cells(spec, 200)
    assert np.sum(u[0]) / 200 == pytest.approx(1.0, abs=1e-14)
    x = (np.arange(200) + 0.5) / 200
    assert np.allclose(u[0], 1.0 + 0.2 * np.sin(2.0 * math.pi * x), atol=1e-4)
    _, vel, p = primitive_arrays(spec.gas, u)
    assert np.allclose(vel, 1.0) and np.allclose(p, 1.0)


def test_make_grid():
    grid = make_grid(build("sod"))
    assert isinstance(grid, Grid1D)
    assert grid.n_cells == 400 and grid.dx == 1.0 / 400
    grid = make_grid(build("quadrant_2d"), (20, 10))
    assert isinstance(grid, Grid2D)
    assert (grid.nx, grid.ny) == (20, 10)
    assert grid.u[0, 0, 0] == 1.0 and grid.u[0, 0, -1] == 0.125
    assert grid.u[0, -1, -1] == 1.0 and grid.u[0, -1, 0] == 0.125
    assert np.array_equal(make_grid(build("quadrant_2d"), 16).transposed().u, make_grid(build("quadrant_2d"), 16).u)


def test_vortex_sheet_grid():
    grid = make_grid(build("vortex_sheet"), 8)
    rho, vel, p = primitive_arrays(build("vortex_sheet").gas, grid.u)
    assert np.array_equal(vel[1, :, 0], np.full(8, 0.5))
    assert np.array_equal(vel[1, :, -1], np.full(8, -0.5))
    assert np.allclose(p, 1.0)


def test_sample_reference_sod():
    spec = build("sod")
    assert sample_reference(spec, 0.9, 0.2) == PrimState(0.125, (0.0,), 0.1)
    assert sample_reference(spec, 0.05, 0.2) == PrimState(1.0, (0.0,), 1.0)
    star = sample_reference(spec, 0.75, 0.2)
    assert star.p == pytest.approx(0.30313, abs=1e-5)
    assert star.u == pytest.approx(0.92745, abs=1e-5)
    near = sample_reference(spec, 0.5 + 1e-9, 1e-6)
    assert near.rho == pytest.approx(0.42632, abs=1e-5)


def test_sample_reference_entropy_wave_full_period():
    spec = build("entropy_wave")
    for x in (0.1, 0.37, 0.8):
        later = sample_reference(spec, x, 1.0)
        assert later.rho == pytest.approx(1.0 + 0.2 * math.sin(2.0 * math.pi * x), abs=1e-12)
        assert later.u == 1.0 and later.p == 1.0


def test_no_reference():
    with pytest.raises(NoReference):
        sample_reference(build("mirrored_sod"), 0.5, 0.05)
    with pytest.raises(NoReference):
        riemann_solution(build("quadrant_2d"))


def test_reference_grid():
    spec = build("entropy_wave")
    grid = make_grid(spec, 64)
    assert np.allclose(reference_grid(spec, grid, 1.0), grid.u, rtol=0.0, atol=1e-12)
    spec = build("sod")
    grid = make_grid(spec, 100)
    ref = reference_grid(spec, grid, 0.2)
    assert ref.shape == grid.u.shape
    assert ref[0, -1] == 0.125 and ref[0, 0] == 1.0
    spec = build("vortex_sheet")
    grid = make_grid(spec, 8)
    assert np.allclose(reference_grid(spec, grid, 0.2), grid.u, rtol=0.0, atol=1e-10)


def _entry(name="sod"):
    with open(CATALOG) as stream:
        data = json.load(stream)
    return copy.deepcopy(next(e for e in data["problems"] if e["name"] == name))


def test_validate_entry():
    registry = ProblemRegistry(CATALOG, SCHEMA)
    entry = _entry()
    entry["name"] = "my_sod"
    entry["cells"] = 50
    spec = registry.validate_entry(entry)
    assert spec.name == "my_sod" and spec.cells == 50
    broken = _entry()
    del broken["initial"]
    with pytest.raises(ConfigError):
        registry.validate_entry(broken)


def test_problem_from_dict_checks_consistency():
    entry = _entry()
    entry["t_final"] = -1.0
    with pytest.raises(ConfigError):
        problem_from_dict(entry)
    entry = _entry()
    entry["initial"]["left"]["p"] = -1.0
    with pytest.raises(ConfigError):
        problem_from_dict(entry)
    entry = _entry()
    entry["initial"]["left"]["v"] = [0.0, 0.0]
    with pytest.raises(ConfigError):
        problem_from_dict(entry)


def test_registry_rejects_missing_files(tmp_path):
    with pytest.raises(ConfigError):
        ProblemRegistry(tmp_path / "missing.json", SCHEMA)


def test_registry_rejects_schema_violation(tmp_path):
    path = tmp_path / "problems.json"
    path.write_text(json.dumps({"problems": [{"name": "x"}]}))
    with pytest.raises(ConfigError):
        ProblemRegistry(path, SCHEMA)


def test_catalog_validation_tool(tmp_path, capsys):
    sys.path.insert(0, str(project_root / "tools"))
    from validate_problems import validate_problems_config

    assert validate_problems_config()
    assert "(8 problems)" in capsys.readouterr().out
    assert not validate_problems_config(tmp_path / "missing.json")
    path = tmp_path / "problems.json"
    path.write_text(json.dumps({"problems": [{"name": "x"}]}))
    assert not validate_problems_config(path)
