"""
Catalog of initial-value problems.

The catalog lives in `etc/problems.json` and is validated against
`etc/problems.schema.json` before the entries are turned into
`ProblemSpec` objects. Three kinds of initial data are known:

    riemann         two constant states separated by a plane x_axis = interface
    blocks          constant background with constant rectangular blocks
    entropy_wave    rho = rho0 + A sin(2 pi k x), constant velocity and pressure

Initial grids hold exact cell averages of these data.

Configuration parameters:

    path.problems
    path.problems.schema
"""

import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

import jsonschema
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config import CONFIG
from gas_thermo import GasModel, PrimState, conservative_arrays
from globals import ConfigError, InvalidState, NoReference, UnknownProblem
from grid import BoundaryCondition, Grid1D, Grid2D
from riemann import RiemannSolution, sample_many, solve_exact


class ReferenceKind(str, Enum):
    EXACT_RIEMANN = "exact_riemann"
    ANALYTIC = "analytic"
    SELF_CONVERGENCE = "self_convergence"
    NONE = "none"


class StateSpec(BaseModel):
    rho: float
    v: List[float]
    p: Optional[float] = None

    def prim(self, g: GasModel) -> PrimState:
        p = self.p
        if g.isentropic:
            p = g.kappa0 * self.rho**g.gamma
        elif p is None:
            raise ValueError("full Euler state needs a pressure")
        return PrimState(self.rho, tuple(self.v), p)


class RiemannData(BaseModel):
    kind: Literal["riemann"]
    interface: float
    axis: int = 0
    left: StateSpec
    right: StateSpec


class Block(BaseModel):
    box: List[Tuple[float, float]]
    state: StateSpec


class BlocksData(BaseModel):
    kind: Literal["blocks"]
    background: StateSpec
    blocks: List[Block]


class EntropyWaveData(BaseModel):
    kind: Literal["entropy_wave"]
    rho0: float
    amplitude: float
    wavenumber: int = 1
    velocity: List[float]
    p: float


InitialData = Union[RiemannData, BlocksData, EntropyWaveData]


class ProblemSpec(BaseModel):
    """
    One catalog entry; `domain` holds one (low, high) interval per axis
    """

    model_config = ConfigDict(frozen=True)

    name: str
    description: str = ""
    dimension: int
    domain: List[Tuple[float, float]]
    t_final: float
    cells: int = 100
    gas: GasModel = Field(default_factory=GasModel)
    bc: List[BoundaryCondition]
    reference: ReferenceKind
    initial: InitialData = Field(discriminator="kind")

    @field_validator("t_final")
    @classmethod
    def _positive_time(cls, value):
        if not value > 0.0:
            raise ValueError("final time must be positive")
        return value

    @model_validator(mode="after")
    def _consistent(self):
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        if len(self.domain) != self.dimension or len(self.bc) != self.dimension:
            raise ValueError("domain and bc need one entry per axis")
        for low, high in self.domain:
            if not high > low:
                raise ValueError("empty domain interval [%s, %s]" % (low, high))
        for state in self.states():
            if len(state.v) != self.dimension:
                raise ValueError("velocity of %s needs %d components" % (self.name, self.dimension))
            try:
                state.prim(self.gas)
            except InvalidState as exc:
                raise ValueError("invalid initial state in %s: %s" % (self.name, exc))
        if isinstance(self.initial, RiemannData) and self.initial.axis >= self.dimension:
            raise ValueError("interface axis %d outside the domain" % self.initial.axis)
        return self

    def states(self) -> List[StateSpec]:
        data = self.initial
        if isinstance(data, RiemannData):
            return [data.left, data.right]
        if isinstance(data, BlocksData):
            return [data.background] + [block.state for block in data.blocks]
        return [StateSpec(rho=data.rho0 - data.amplitude, v=data.velocity, p=data.p)]

    @property
    def length(self) -> float:
        return self.domain[0][1] - self.domain[0][0]


class ProblemRegistry:
    """
    Problems of a catalog file, validated against its JSON schema
    """

    def __init__(self, config_path: Path, schema_path: Path):
        self.config_path = Path(config_path)
        self.schema_path = Path(schema_path)
        self.problems: Dict[str, ProblemSpec] = {}
        self._load_and_validate()

    def _load_and_validate(self):
        for path in (self.config_path, self.schema_path):
            if not path.exists():
                raise ConfigError("problem catalog file not found", path=str(path))
        with open(self.config_path) as stream:
            data = json.load(stream)
        with open(self.schema_path) as stream:
            self.schema = json.load(stream)

        try:
            jsonschema.validate(instance=data, schema=self.schema)
        except jsonschema.ValidationError as exc:
            raise ConfigError(
                "problem catalog violates schema: %s" % exc.message,
                path=" -> ".join(str(p) for p in exc.path),
            )

        for entry in data["problems"]:
            spec = problem_from_dict(entry)
            if spec.name in self.problems:
                raise ConfigError("duplicate problem %r" % spec.name)
            self.problems[spec.name] = spec
        logging.debug("problem catalog %s: %d problems", self.config_path, len(self.problems))

    def get(self, name: str) -> ProblemSpec:
        if name not in self.problems:
            raise UnknownProblem(
                "unknown problem %r, available: %s" % (name, ", ".join(sorted(self.problems)))
            )
        return self.problems[name]

    def names(self) -> List[str]:
        return sorted(self.problems)

    def validate_entry(self, entry: dict) -> ProblemSpec:
        """
        Validate a single problem (e.g. inline in a run configuration)
        """
        schema = {"definitions": self.schema["definitions"], "$ref": "#/definitions/problem"}
        try:
            jsonschema.validate(instance=entry, schema=schema)
        except jsonschema.ValidationError as exc:
            raise ConfigError("inline problem violates schema: %s" % exc.message)
        return problem_from_dict(entry)


def problem_from_dict(entry: dict) -> ProblemSpec:
    try:
        return ProblemSpec(**entry)
    except ValidationError as exc:
        raise ConfigError("invalid problem %r: %s" % (entry.get("name"), exc))


_registry: Optional[ProblemRegistry] = None


def get_problem_registry() -> ProblemRegistry:
    """Get or create the global problem registry"""
    global _registry
    if _registry is None:
        _registry = ProblemRegistry(CONFIG["path.problems"], CONFIG["path.problems.schema"])
    return _registry


def reset_problem_registry():
    """Reset global registry (for testing)"""
    global _registry
    _registry = None


def build(name: str) -> ProblemSpec:
    return get_problem_registry().get(name)


#
# initial grids
#


def _overlap(low, high, faces):
    """
    Fraction of each cell [faces[i], faces[i+1]] covered by [low, high]
    """
    left = np.maximum(faces[:-1], low)
    right = np.minimum(faces[1:], high)
    return np.clip(right - left, 0.0, None) / np.diff(faces)


def _faces(spec: ProblemSpec, cells: Tuple[int, ...]):
    return [
        np.linspace(low, high, n + 1) for (low, high), n in zip(spec.domain, cells)
    ]


def _constant(g: GasModel, state: StateSpec) -> np.ndarray:
    w = state.prim(g)
    return conservative_arrays(g, np.array(w.rho), np.array(w.v), np.array(w.p))


def _cell_shape(spec: ProblemSpec, cells) -> Tuple[int, ...]:
    if cells is None:
        cells = spec.cells
    if isinstance(cells, int):
        return (cells,) * spec.dimension
    cells = tuple(int(n) for n in cells)
    if len(cells) != spec.dimension:
        raise ValueError("%d cell counts for a %dD problem" % (len(cells), spec.dimension))
    return cells


def initial_cells(spec: ProblemSpec, cells=None) -> np.ndarray:
    """
    Cell averages of the initial data, shaped (m, n) or (m, ny, nx)
    """
    g = spec.gas
    shape = _cell_shape(spec, cells)
    faces = _faces(spec, shape)
    data = spec.initial

    if isinstance(data, EntropyWaveData):
        return _entropy_wave_averages(spec, faces, shift=0.0)

    if isinstance(data, RiemannData):
        fraction = _overlap(-math.inf, data.interface, faces[data.axis])
        left = _constant(g, data.left)
        right = _constant(g, data.right)
        if spec.dimension == 1:
            return left[:, None] * fraction + right[:, None] * (1.0 - fraction)
        fraction = fraction[None, :] if data.axis == 0 else fraction[:, None]
        fraction = np.broadcast_to(fraction, shape[::-1])
        return left[:, None, None] * fraction + right[:, None, None] * (1.0 - fraction)

    background = _constant(g, data.background)
    covered = np.zeros(shape[::-1])
    u = np.zeros((background.shape[0],) + shape[::-1])
    for block in data.blocks:
        fraction = _overlap(block.box[0][0], block.box[0][1], faces[0])
        if spec.dimension == 2:
            fraction = _overlap(block.box[1][0], block.box[1][1], faces[1])[:, None] * fraction[None, :]
        covered = covered + fraction
        state = _constant(g, block.state)
        u = u + state.reshape((-1,) + (1,) * spec.dimension) * fraction
    return u + background.reshape((-1,) + (1,) * spec.dimension) * (1.0 - covered)


def make_grid(spec: ProblemSpec, cells=None, ghost: int = 1):
    shape = _cell_shape(spec, cells)
    u = initial_cells(spec, shape)
    (x_low, x_high) = spec.domain[0]
    dx = (x_high - x_low) / shape[0]
    if spec.dimension == 1:
        return Grid1D(u, dx, spec.bc[0], x_low, ghost)
    (y_low, y_high) = spec.domain[1]
    return Grid2D(u, dx, (y_high - y_low) / shape[1], spec.bc[0], spec.bc[1], x_low, y_low, ghost)


def _entropy_wave_averages(spec: ProblemSpec, faces, shift: float) -> np.ndarray:
    g = spec.gas
    data = spec.initial
    x_faces = faces[0] - shift
    k = 2.0 * math.pi * data.wavenumber / spec.length
    dx = np.diff(faces[0])
    rho = data.rho0 + data.amplitude * (np.cos(k * x_faces[:-1]) - np.cos(k * x_faces[1:])) / (k * dx)
    vel = np.array(data.velocity, dtype=float)[:, None] * np.ones_like(rho)
    p = np.full_like(rho, data.p)
    u = conservative_arrays(g, rho, vel, p)
    if spec.dimension == 2:
        u = np.repeat(u[:, None, :], len(faces[1]) - 1, axis=1)
    return u


#
# references
#


def _riemann_states(spec: ProblemSpec):
    """
    Left/right states and their solution, velocities ordered normal first
    """
    data = spec.initial
    w_l = data.left.prim(spec.gas)
    w_r = data.right.prim(spec.gas)
    if data.axis == 1:
        w_l = PrimState(w_l.rho, w_l.v[::-1], w_l.p)
        w_r = PrimState(w_r.rho, w_r.v[::-1], w_r.p)
    return w_l, w_r, solve_exact(spec.gas, w_l, w_r)


def riemann_solution(spec: ProblemSpec) -> RiemannSolution:
    if spec.reference != ReferenceKind.EXACT_RIEMANN:
        raise NoReference("problem %s has no exact Riemann solution" % spec.name)
    return _riemann_states(spec)[2]


def _sample_riemann(spec: ProblemSpec, coordinate, t: float):
    data = spec.initial
    w_l, w_r, sol = _riemann_states(spec)
    coordinate = np.asarray(coordinate, dtype=float)
    if t > 0.0:
        speeds = (coordinate - data.interface) / t
    else:
        speeds = np.where(coordinate <= data.interface, -math.inf, math.inf)
    rho, un, p, left = sample_many(sol, spec.gas, w_l, w_r, speeds)
    vel = [un]
    for k in range(1, w_l.dim):
        vel.append(np.where(left, w_l.v[k], w_r.v[k]))
    if data.axis == 1:
        vel = vel[::-1]
    return rho, np.array(vel), p


def sample_reference(spec: ProblemSpec, x, t: float) -> PrimState:
    """
    Exact solution at the point `x` (a number, or (x, y) in 2D) and time `t`
    """
    point = np.atleast_1d(np.asarray(x, dtype=float))
    if spec.reference == ReferenceKind.EXACT_RIEMANN:
        rho, vel, p = _sample_riemann(spec, point[spec.initial.axis : spec.initial.axis + 1], t)
        return PrimState(float(rho[0]), tuple(float(v[0]) for v in vel), float(p[0]))
    if spec.reference == ReferenceKind.ANALYTIC:
        data = spec.initial
        k = 2.0 * math.pi * data.wavenumber / spec.length
        shifted = point[0] - data.velocity[0] * t
        rho = data.rho0 + data.amplitude * math.sin(k * shifted)
        return PrimState(rho, tuple(data.velocity), data.p)
    raise NoReference("problem %s has no exact reference (%s)" % (spec.name, spec.reference.value))


def reference_grid(spec: ProblemSpec, grid, t: float) -> np.ndarray:
    """
    Reference solution in conservative variables on the cells of `grid`:
    point values at cell centres for Riemann problems, exact cell averages
    for the entropy wave
    """
    g = spec.gas
    if spec.reference == ReferenceKind.EXACT_RIEMANN:
        axis = spec.initial.axis
        if isinstance(grid, Grid2D):
            centers = grid.x_centers if axis == 0 else grid.y_centers
        else:
            centers = grid.x_centers
        rho, vel, p = _sample_riemann(spec, centers, t)
        line = conservative_arrays(g, rho, vel, p)
        if isinstance(grid, Grid2D):
            if axis == 0:
                return np.repeat(line[:, None, :], grid.ny, axis=1)
            return np.repeat(line[:, :, None], grid.nx, axis=2)
        return line
    if spec.reference == ReferenceKind.ANALYTIC:
        shape = grid.u.shape[1:][::-1]
        faces = _faces(spec, shape)
        return _entropy_wave_averages(spec, faces, shift=spec.initial.velocity[0] * t)
    raise NoReference("problem %s has no exact reference (%s)" % (spec.name, spec.reference.value))
