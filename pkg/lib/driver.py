"""
Time marching and batch runs.

    evolve              advance a grid to a final time, recording one
                        StepRecord per step and the requested snapshots
    run_problem         one catalog problem with one scheme at one resolution
    convergence_study   the same problem over a sequence of resolutions
    compare_schemes     several schemes on one problem

Cases of a study are independent and may run in worker processes
(`run.workers`); every case is deterministic on its own, so results do
not depend on the number of workers.

Configuration parameters:

    run.workers
"""

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import CONFIG
from diagnostics import (
    ConvergenceOrder,
    ErrorNorms,
    RunReport,
    StepRecord,
    conserved_totals,
    convergence_order,
    entropy_total,
    error_norms,
    is_periodic,
    restrict,
    shock_locator,
)
from euler_flux import max_wave_speed
from globals import GeometryMismatch, InsufficientData, NoReference, SolverError
from grid import Grid2D
from multid import strang_split_step
from problems import ProblemSpec, ReferenceKind, make_grid, reference_grid, riemann_solution
from riemann import WaveKind
from schemes import Scheme, SchemeConfig, cfl_dt, make_scheme

# relative slack when a step lands on a target time
_TIME_SLACK = 1e-12


def variable_names(g, dimension: int) -> Tuple[str, ...]:
    names = ("rho", "m_x", "m_y")[: dimension + 1]
    if g.isentropic:
        return names
    return names + ("E",)


def _advance(scheme: Scheme, grid, dt: float, step_index: int):
    if isinstance(grid, Grid2D):
        return strang_split_step(scheme.g, grid, dt, scheme, step_index)
    return scheme.step(grid, dt, step_index)


def evolve(
    scheme: Scheme,
    grid,
    t_final: float,
    snapshots: Sequence[float] = (),
    dt: Optional[float] = None,
    max_steps: Optional[int] = None,
    dx_reference: Optional[float] = None,
):
    """
    Advance `grid` from t = 0 to `t_final`.

    The time step is the CFL step of the scheme unless `dt` is fixed;
    a step is shortened so that it ends exactly on each snapshot time
    and on `t_final`. With `max_steps` the march stops after that many
    steps even if `t_final` is not reached.

    Return (grid, time, {snapshot time: grid}, RunReport).
    """
    g = scheme.g
    dimension = 2 if isinstance(grid, Grid2D) else 1
    periodic = is_periodic(grid)
    report = RunReport(variable_names(g, dimension), entropy_evaluated=periodic)

    targets = sorted(set(float(t) for t in snapshots) | {float(t_final)})
    if targets[0] < 0.0 or targets[-1] > t_final:
        raise ValueError("snapshot times must lie in [0, %g]" % t_final)
    frames: Dict[float, object] = {}
    if targets[0] == 0.0:
        frames[0.0] = grid
        targets = targets[1:]

    t = 0.0
    step = 0
    entropy = entropy_total(g, grid) if periodic else None
    while targets and (max_steps is None or step < max_steps):
        target = targets[0]
        try:
            speed = max_wave_speed(g, grid)
            dt_step = dt if dt is not None else cfl_dt(g, grid, scheme.cfg, dx_reference)
            landed = t + dt_step >= target * (1.0 - _TIME_SLACK)
            if landed:
                dt_step = target - t
            grid = _advance(scheme, grid, dt_step, step)
        except SolverError as exc:
            raise exc.annotate(step=step, time=t)
        t = target if landed else t + dt_step
        step += 1

        production = None
        if periodic:
            after = entropy_total(g, grid)
            production = after - entropy
            entropy = after
        report.add(
            StepRecord(
                step=step,
                time=t,
                dt=dt_step,
                totals=tuple(conserved_totals(grid)),
                entropy=entropy,
                production=production,
                max_speed=speed,
            )
        )
        if landed:
            frames[target] = grid
            targets = targets[1:]

    logging.debug("%s: %d steps to t=%g", scheme.name(), step, t)
    return grid, t, frames, report


@dataclass
class RunResult:
    problem: str
    scheme: str
    cells: Tuple[int, ...]
    grid: object
    time: float
    report: RunReport
    snapshots: Dict[float, object] = field(default_factory=dict)

    @property
    def errors(self) -> Optional[ErrorNorms]:
        return self.report.final_errors

    @property
    def steps(self) -> int:
        return len(self.report.records)


def reference_shock_positions(spec: ProblemSpec, t: float) -> List[float]:
    """
    Positions of the shocks of the exact Riemann solution at time `t`
    """
    if spec.reference != ReferenceKind.EXACT_RIEMANN:
        return []
    sol = riemann_solution(spec)
    interface = spec.initial.interface
    positions = []
    if sol.left_wave == WaveKind.SHOCK:
        positions.append(interface + sol.left_speeds[0] * t)
    if sol.right_wave == WaveKind.SHOCK:
        positions.append(interface + sol.right_speeds[1] * t)
    return positions


def run_problem(
    spec: ProblemSpec,
    cfg: SchemeConfig,
    cells=None,
    snapshots: Sequence[float] = (),
    dx_reference: Optional[float] = None,
) -> RunResult:
    """
    Solve `spec` to its final time; error norms are filled in when the
    problem has an exact reference, shock positions for 1D problems
    """
    scheme = make_scheme(spec.gas, cfg)
    grid = make_grid(spec, cells)
    logging.info("run %s with %s on %s cells", spec.name, cfg.scheme, grid.u.shape[1:][::-1])
    grid, t, frames, report = evolve(
        scheme, grid, spec.t_final, snapshots=snapshots, dx_reference=dx_reference
    )
    if spec.reference in (ReferenceKind.EXACT_RIEMANN, ReferenceKind.ANALYTIC):
        report.final_errors = error_norms(grid, reference_grid(spec, grid, t))
    if spec.dimension == 1:
        report.shock_positions = shock_locator(grid)
    return RunResult(spec.name, cfg.scheme, tuple(grid.u.shape[1:][::-1]), grid, t, report, frames)


def _run_case(case):
    spec, cfg, cells, dx_reference = case
    return run_problem(spec, cfg, cells, dx_reference=dx_reference)


def worker_count(requested: Optional[int] = None) -> int:
    workers = requested if requested is not None else CONFIG["run.workers"]
    return max(1, min(int(workers), os.cpu_count() or 1))


def run_cases(cases, workers: Optional[int] = None) -> List[RunResult]:
    """
    Run (spec, cfg, cells, dx_reference) cases, results in input order
    """
    cases = list(cases)
    workers = min(worker_count(workers), len(cases))
    if workers <= 1:
        return [_run_case(case) for case in cases]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_case, cases))


@dataclass
class ConvergenceStudy:
    problem: str
    scheme: str
    resolutions: List[int]
    errors: List[float]
    order: ConvergenceOrder

    def rows(self):
        for cells, error in zip(self.resolutions, self.errors):
            yield cells, error


def _self_convergence_errors(results: List[RunResult], reference: RunResult) -> List[float]:
    fine = reference.grid
    errors = []
    for result in results:
        factor = fine.u.shape[-1] // result.grid.u.shape[-1]
        if factor * result.grid.u.shape[-1] != fine.u.shape[-1]:
            raise GeometryMismatch(
                "reference resolution is not a multiple of %d" % result.grid.u.shape[-1]
            )
        errors.append(error_norms(result.grid, restrict(fine.u, factor)).l1[0])
    return errors


def convergence_study(
    spec: ProblemSpec,
    cfg: SchemeConfig,
    resolutions: Sequence[int],
    workers: Optional[int] = None,
) -> ConvergenceStudy:
    """
    L1 density errors over `resolutions` and the fitted order.

    With dt_power > 1 the time step follows dx^dt_power relative to the
    coarsest grid. Problems without an exact reference are measured
    against a run on twice the finest resolution.
    """
    resolutions = sorted(int(n) for n in resolutions)
    if len(resolutions) < 3:
        raise InsufficientData("need at least 3 resolutions", levels=len(resolutions))
    if spec.reference == ReferenceKind.NONE:
        raise NoReference("problem %s has no reference for a convergence study" % spec.name)

    dx_reference = spec.length / resolutions[0]
    cases = [(spec, cfg, n, dx_reference) for n in resolutions]
    self_converging = spec.reference == ReferenceKind.SELF_CONVERGENCE
    if self_converging:
        cases.append((spec, cfg, 2 * resolutions[-1], dx_reference))
    results = run_cases(cases, workers)

    if self_converging:
        errors = _self_convergence_errors(results[:-1], results[-1])
    else:
        errors = [result.errors.l1[0] for result in results]
    pairs = [(spec.length / n, e) for n, e in zip(resolutions, errors)]
    order = convergence_order(pairs)
    logging.info("%s/%s: order %.3f over %s", spec.name, cfg.scheme, order.order, resolutions)
    return ConvergenceStudy(spec.name, cfg.scheme, resolutions, errors, order)


def compare_schemes(
    spec: ProblemSpec,
    configs: Sequence[SchemeConfig],
    cells=None,
    workers: Optional[int] = None,
) -> List[RunResult]:
    return run_cases([(spec, cfg, cells, None) for cfg in configs], workers)


def entropy_production_total(result: RunResult) -> Optional[float]:
    total = result.report.total_production
    if total is None or not math.isfinite(total):
        return None
    return total


def density_error(result: RunResult) -> Optional[float]:
    if result.errors is None:
        return None
    return float(np.asarray(result.errors.l1)[0])
