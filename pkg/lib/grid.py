"""
Uniform Cartesian grids of cell averages.

A grid stores its interior cells only; schemes ask for a padded copy
with as many ghost cells as their stencil needs (`Grid1D.padded`).
Grids are immutable in use: a step produces a new grid through
`with_cells()`.

The normal momentum of a 1D grid is conserved variable 1, so reflective
boundaries negate that component only. 2D grids keep (rho, m_x, m_y[, rhoE])
and are swept row by row (see multid.py).
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import List

import numpy as np

from gas_thermo import ConsState, GasModel


class BoundaryCondition(str, Enum):
    TRANSMISSIVE = "transmissive"
    REFLECTIVE = "reflective"
    PERIODIC = "periodic"


def pad_axis(u: np.ndarray, ghost: int, bc: BoundaryCondition, normal: int = 1) -> np.ndarray:
    """
    Return `u` extended by `ghost` cells on both ends of its last axis.
    `normal` is the index of the conserved variable that flips sign
    at a reflective boundary.
    """
    if ghost == 0:
        return u.copy()
    n = u.shape[-1]
    if bc == BoundaryCondition.PERIODIC:
        if ghost > n:
            raise ValueError("%d ghost cells exceed %d periodic cells" % (ghost, n))
        left = u[..., n - ghost :]
        right = u[..., :ghost]
    elif bc == BoundaryCondition.TRANSMISSIVE:
        left = np.repeat(u[..., :1], ghost, axis=-1)
        right = np.repeat(u[..., -1:], ghost, axis=-1)
    elif bc == BoundaryCondition.REFLECTIVE:
        left = u[..., ghost - 1 :: -1].copy()
        right = u[..., : n - ghost - 1 : -1].copy()
        left[normal] = -left[normal]
        right[normal] = -right[normal]
    else:
        raise ValueError("unknown boundary condition %r" % bc)
    return np.concatenate([left, u, right], axis=-1)


@dataclass(frozen=True)
class Grid1D:
    """
    `u` has shape (m, n_cells); cell i covers [x_left + i dx, x_left + (i+1) dx]
    """

    u: np.ndarray
    dx: float
    bc: BoundaryCondition = BoundaryCondition.TRANSMISSIVE
    x_left: float = 0.0
    ghost: int = 1

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=float)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "bc", BoundaryCondition(self.bc))
        if u.ndim != 2:
            raise ValueError("Grid1D cells must be a (m, n) array")
        if u.shape[1] < 4:
            raise ValueError("Grid1D needs at least 4 cells, got %d" % u.shape[1])
        if not self.dx > 0.0:
            raise ValueError("dx must be positive")
        if self.ghost < 1:
            raise ValueError("at least one ghost cell is needed")

    @property
    def n_cells(self) -> int:
        return self.u.shape[1]

    @property
    def n_vars(self) -> int:
        return self.u.shape[0]

    @property
    def length(self) -> float:
        return self.n_cells * self.dx

    @property
    def x_centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def x_faces(self) -> np.ndarray:
        return self.x_left + np.arange(self.n_cells + 1) * self.dx

    def cell(self, g: GasModel, i: int) -> ConsState:
        return ConsState.from_vector(g, self.u[:, i])

    def cells(self, g: GasModel) -> List[ConsState]:
        return [self.cell(g, i) for i in range(self.n_cells)]

    def padded(self, ghost: int = None) -> np.ndarray:
        return pad_axis(self.u, self.ghost if ghost is None else ghost, self.bc)

    def with_cells(self, u: np.ndarray) -> "Grid1D":
        return replace(self, u=u)

    def with_ghost(self, ghost: int) -> "Grid1D":
        return replace(self, ghost=max(self.ghost, ghost))

    def mirrored(self) -> "Grid1D":
        """
        Grid reflected about its centre: cell order reversed, normal momentum negated
        """
        u = self.u[:, ::-1].copy()
        u[1] = -u[1]
        return replace(self, u=u)

    def same_geometry(self, other) -> bool:
        return (
            isinstance(other, Grid1D)
            and self.u.shape == other.u.shape
            and self.dx == other.dx
            and self.x_left == other.x_left
        )


@dataclass(frozen=True)
class Grid2D:
    """
    `u` has shape (m, ny, nx); conserved variables (rho, m_x, m_y[, rhoE])
    """

    u: np.ndarray
    dx: float
    dy: float
    bc_x: BoundaryCondition = BoundaryCondition.TRANSMISSIVE
    bc_y: BoundaryCondition = BoundaryCondition.TRANSMISSIVE
    x_left: float = 0.0
    y_bottom: float = 0.0
    ghost: int = 1

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=float)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "bc_x", BoundaryCondition(self.bc_x))
        object.__setattr__(self, "bc_y", BoundaryCondition(self.bc_y))
        if u.ndim != 3:
            raise ValueError("Grid2D cells must be a (m, ny, nx) array")
        # a single row is the 1D reduction
        ny, nx = u.shape[1:]
        if nx < 4 or not (ny >= 4 or ny == 1):
            raise ValueError("Grid2D needs at least 4 cells per axis (or ny = 1), got %s" % (u.shape[1:],))
        if not (self.dx > 0.0 and self.dy > 0.0):
            raise ValueError("dx and dy must be positive")

    @property
    def nx(self) -> int:
        return self.u.shape[2]

    @property
    def ny(self) -> int:
        return self.u.shape[1]

    @property
    def n_vars(self) -> int:
        return self.u.shape[0]

    @property
    def x_centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def y_centers(self) -> np.ndarray:
        return self.y_bottom + (np.arange(self.ny) + 0.5) * self.dy

    def with_cells(self, u: np.ndarray) -> "Grid2D":
        return replace(self, u=u)

    def row(self, j: int) -> Grid1D:
        """
        Row `j` as a 1D grid along x
        """
        return Grid1D(
            np.ascontiguousarray(self.u[:, j, :]),
            self.dx,
            self.bc_x,
            self.x_left,
            self.ghost,
        )

    def transposed(self) -> "Grid2D":
        """
        Grid with the roles of x and y exchanged (momentum components swapped)
        """
        u = np.ascontiguousarray(np.swapaxes(self.u, 1, 2))
        u[[1, 2]] = u[[2, 1]]
        return Grid2D(
            u,
            self.dy,
            self.dx,
            self.bc_y,
            self.bc_x,
            self.y_bottom,
            self.x_left,
            self.ghost,
        )

    def same_geometry(self, other) -> bool:
        return (
            isinstance(other, Grid2D)
            and self.u.shape == other.u.shape
            and self.dx == other.dx
            and self.dy == other.dy
        )
