"""
Verification instruments: conserved totals, discrete entropy production,
error norms, convergence orders, shock positions and the per-step run report.

All sums over cells use `math.fsum`, which is exactly rounded and
therefore independent of the summation order.

Configuration parameters:

    diagnostics.shock_threshold
    csv.digits
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import CONFIG
from gas_thermo import GasModel, entropy_array, momentum_square, primitive_arrays
from globals import GeometryMismatch, InsufficientData
from grid import BoundaryCondition, Grid1D, Grid2D


def cell_volume(grid) -> float:
    if isinstance(grid, Grid2D):
        return grid.dx * grid.dy
    return grid.dx


def _total(values: np.ndarray, volume: float) -> float:
    return math.fsum(np.asarray(values, dtype=float).ravel()) * volume


def conserved_totals(grid) -> np.ndarray:
    volume = cell_volume(grid)
    return np.array([_total(component, volume) for component in grid.u])


def entropy_density(g: GasModel, u: np.ndarray) -> np.ndarray:
    """
    rho S for the full system; for the isentropic system minus the
    mechanical energy, so that production is nonnegative in both cases
    """
    rho, vel, p = primitive_arrays(g, u)
    if g.isentropic:
        return -(0.5 * rho * momentum_square(vel) + p / (g.gamma - 1.0))
    return rho * entropy_array(g, rho, p)


def entropy_total(g: GasModel, grid) -> float:
    return _total(entropy_density(g, grid.u), cell_volume(grid))


def _require_same_geometry(first, second):
    if not first.same_geometry(second):
        raise GeometryMismatch(
            "grids differ in geometry",
            first=first.u.shape,
            second=second.u.shape,
        )


def entropy_production(g: GasModel, grid_before, grid_after, dt: float) -> float:
    """
    Change of the total entropy over one step. On a periodic domain the
    boundary fluxes cancel and this is the discrete entropy production.
    """
    _require_same_geometry(grid_before, grid_after)
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    return entropy_total(g, grid_after) - entropy_total(g, grid_before)


def is_periodic(grid) -> bool:
    if isinstance(grid, Grid2D):
        return grid.bc_x == BoundaryCondition.PERIODIC and grid.bc_y == BoundaryCondition.PERIODIC
    return grid.bc == BoundaryCondition.PERIODIC


@dataclass(frozen=True)
class ErrorNorms:
    l1: np.ndarray
    linf: np.ndarray

    def __iter__(self):
        return iter((self.l1, self.linf))


def error_norms(grid, reference) -> ErrorNorms:
    """
    Per-component L1 (sum |u - ref| dV) and maximum norms;
    `reference` is a grid or an array shaped like `grid.u`
    """
    ref = reference.u if hasattr(reference, "u") else np.asarray(reference, dtype=float)
    if hasattr(reference, "same_geometry"):
        _require_same_geometry(grid, reference)
    if ref.shape != grid.u.shape:
        raise GeometryMismatch("reference shape differs", grid=grid.u.shape, reference=ref.shape)
    diff = np.abs(grid.u - ref)
    volume = cell_volume(grid)
    l1 = np.array([_total(component, volume) for component in diff])
    linf = np.array([float(np.max(component)) for component in diff])
    return ErrorNorms(l1, linf)


@dataclass(frozen=True)
class ConvergenceOrder:
    order: float
    monotone: bool
    levels: int

    def __float__(self):
        return self.order


def convergence_order(errors: Sequence[Tuple[float, float]]) -> ConvergenceOrder:
    """
    Least-squares slope of log(error) over log(dx)
    """
    if len(errors) < 3:
        raise InsufficientData("need at least 3 refinement levels", levels=len(errors))
    pairs = sorted(errors, key=lambda pair: -pair[0])
    dx = np.array([pair[0] for pair in pairs], dtype=float)
    err = np.array([pair[1] for pair in pairs], dtype=float)
    if not (np.all(dx > 0.0) and np.all(err > 0.0) and np.all(np.isfinite(err))):
        raise InsufficientData("cell sizes and errors must be positive and finite")
    slope = np.polyfit(np.log(dx), np.log(err), 1)[0]
    monotone = bool(np.all(np.diff(err) < 0.0))
    if not monotone:
        logging.warning("convergence_order: errors do not decrease monotonically: %s", err)
    return ConvergenceOrder(float(slope), monotone, len(pairs))


def shock_locator(grid: Grid1D, component: int = 0, threshold: Optional[float] = None) -> List[float]:
    """
    Face positions where |jump| / min(neighbours) of `component` exceeds
    `threshold`; each run of consecutive flagged faces gives its midpoint
    """
    if threshold is None:
        threshold = CONFIG["diagnostics.shock_threshold"]
    values = grid.u[component]
    jump = np.abs(np.diff(values)) / np.minimum(np.abs(values[:-1]), np.abs(values[1:]))
    flagged = np.flatnonzero(jump > threshold)
    # flagged[k] is the face between cells k and k+1
    faces = grid.x_faces[1:-1]
    positions = []
    start = previous = None
    for k in flagged:
        if previous is not None and k == previous + 1:
            previous = k
            continue
        if start is not None:
            positions.append(0.5 * (faces[start] + faces[previous]))
        start = previous = k
    if start is not None:
        positions.append(0.5 * (faces[start] + faces[previous]))
    return positions


def restrict(u: np.ndarray, factor: int) -> np.ndarray:
    """
    Conservative coarsening: averages of `factor` consecutive cells
    along every spatial axis
    """
    if factor == 1:
        return u.copy()
    out = u
    for axis in range(1, u.ndim):
        n = out.shape[axis]
        if n % factor:
            raise GeometryMismatch("%d cells cannot be coarsened by %d" % (n, factor))
        shape = out.shape[:axis] + (n // factor, factor) + out.shape[axis + 1 :]
        out = out.reshape(shape).mean(axis=axis + 1)
    return out


@dataclass(frozen=True)
class StepRecord:
    step: int
    time: float
    dt: float
    totals: Tuple[float, ...]
    entropy: Optional[float]
    production: Optional[float]
    max_speed: float


@dataclass
class RunReport:
    """
    One record per step. Entropy columns are None ("not evaluated")
    unless the domain is periodic.
    """

    variables: Tuple[str, ...]
    entropy_evaluated: bool
    records: List[StepRecord] = field(default_factory=list)
    final_errors: Optional[ErrorNorms] = None
    shock_positions: List[float] = field(default_factory=list)

    def add(self, record: StepRecord):
        if self.records and not record.time > self.records[-1].time:
            raise ValueError(
                "report times must increase: %r after %r" % (record.time, self.records[-1].time)
            )
        if not all(math.isfinite(x) for x in record.totals):
            raise ValueError("non-finite conserved totals at step %d" % record.step)
        self.records.append(record)

    @property
    def total_production(self) -> Optional[float]:
        if not self.entropy_evaluated:
            return None
        return math.fsum(r.production for r in self.records if r.production is not None)

    def header(self) -> List[str]:
        return (
            ["step", "time", "dt"]
            + ["total_%s" % name for name in self.variables]
            + ["entropy", "entropy_production", "max_wave_speed"]
        )

    def rows(self):
        fmt = "%%.%dg" % CONFIG["csv.digits"]
        for r in self.records:
            entropy = "not evaluated" if r.entropy is None else fmt % r.entropy
            production = "not evaluated" if r.production is None else fmt % r.production
            yield (
                [str(r.step), fmt % r.time, fmt % r.dt]
                + [fmt % x for x in r.totals]
                + [entropy, production, fmt % r.max_speed]
            )

    def to_csv(self, path):
        with open(path, "w", newline="") as stream:
            writer = csv.writer(stream)
            writer.writerow(self.header())
            for row in self.rows():
                writer.writerow(row)
