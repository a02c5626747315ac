"""Uniform Cartesian grids, Active Flux fields and ghost-cell handling.

Storage convention (1D): cell ``i`` spans ``[x_{i-1/2}, x_{i+1/2}]``; the point
value at interface ``x_{i+1/2}`` lives in slot ``i + 1`` so that slot ``k`` sits
at ``x_min + k * dx``.  Interface values are shared between the two adjacent
cells.  The 2D layout follows the same rule along each axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

GHOST_DEPTH = 2

BOUNDARY_KINDS = ("periodic", "copy", "static")


class GridError(ValueError):
    """Invalid grid parameters or out-of-range lookups."""


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int
    dx: float = field(init=False)

    def __post_init__(self):
        if self.n_cells < 3:
            raise GridError(f"n_cells must be >= 3, got {self.n_cells}")
        if not self.x_max > self.x_min:
            raise GridError("x_max must exceed x_min")
        object.__setattr__(self, "dx", (self.x_max - self.x_min) / self.n_cells)

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_cells + 1) * self.dx

    def extended(self, depth: int = GHOST_DEPTH) -> "Grid1D":
        """The same grid with ``depth`` extra cells on each side."""
        return Grid1D(self.x_min - depth * self.dx, self.x_max + depth * self.dx,
                      self.n_cells + 2 * depth)


@dataclass(frozen=True)
class Grid2D:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    n_x: int
    n_y: int
    dx: float = field(init=False)
    dy: float = field(init=False)

    def __post_init__(self):
        if self.n_x < 3 or self.n_y < 3:
            raise GridError(f"n_x, n_y must be >= 3, got {self.n_x}, {self.n_y}")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise GridError("empty domain")
        object.__setattr__(self, "dx", (self.x_max - self.x_min) / self.n_x)
        object.__setattr__(self, "dy", (self.y_max - self.y_min) / self.n_y)

    @property
    def x_centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_x) + 0.5) * self.dx

    @property
    def y_centers(self) -> np.ndarray:
        return self.y_min + (np.arange(self.n_y) + 0.5) * self.dy

    @property
    def x_interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_x + 1) * self.dx

    @property
    def y_interfaces(self) -> np.ndarray:
        return self.y_min + np.arange(self.n_y + 1) * self.dy

    def axis(self, k: int) -> Grid1D:
        if k == 0:
            return Grid1D(self.x_min, self.x_max, self.n_x)
        return Grid1D(self.y_min, self.y_max, self.n_y)


@dataclass
class Field1D:
    """Cell averages ``(m, n)`` and shared interface point values ``(m, n+1)``."""

    averages: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        self.averages = np.atleast_2d(np.asarray(self.averages, dtype=float))
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        m, n = self.averages.shape
        if self.points.shape != (m, n + 1):
            raise GridError(
                f"points shape {self.points.shape} does not match averages {(m, n)}")

    @property
    def m(self) -> int:
        return self.averages.shape[0]

    @property
    def n_cells(self) -> int:
        return self.averages.shape[1]

    def copy(self) -> "Field1D":
        return Field1D(self.averages.copy(), self.points.copy())

    @classmethod
    def zeros(cls, grid: Grid1D, m: int = 1) -> "Field1D":
        return cls(np.zeros((m, grid.n_cells)), np.zeros((m, grid.n_cells + 1)))


@dataclass
class Field2D:
    """Scalar 2D Active Flux state.

    ``edges_v[i, j]`` sits at ``(x_{i-1/2}, y_j)``, ``edges_h[i, j]`` at
    ``(x_i, y_{j-1/2})`` and ``nodes[i, j]`` at ``(x_{i-1/2}, y_{j-1/2})``
    (all in storage-slot numbering).
    """

    averages: np.ndarray
    nodes: np.ndarray
    edges_v: np.ndarray
    edges_h: np.ndarray

    def __post_init__(self):
        self.averages = np.asarray(self.averages, dtype=float)
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.edges_v = np.asarray(self.edges_v, dtype=float)
        self.edges_h = np.asarray(self.edges_h, dtype=float)
        nx, ny = self.averages.shape
        expected = {"nodes": (nx + 1, ny + 1), "edges_v": (nx + 1, ny),
                    "edges_h": (nx, ny + 1)}
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise GridError(f"{name} has shape {getattr(self, name).shape}, "
                                f"expected {shape}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.averages.shape

    def copy(self) -> "Field2D":
        return Field2D(self.averages.copy(), self.nodes.copy(),
                       self.edges_v.copy(), self.edges_h.copy())

    def cell_dofs(self, i: int, j: int) -> tuple[float, ...]:
        """The 9 DoFs of cell (i, j): avg, W, E, S, N, SW, SE, NW, NE."""
        return (self.averages[i, j],
                self.edges_v[i, j], self.edges_v[i + 1, j],
                self.edges_h[i, j], self.edges_h[i, j + 1],
                self.nodes[i, j], self.nodes[i + 1, j],
                self.nodes[i, j + 1], self.nodes[i + 1, j + 1])

    @classmethod
    def zeros(cls, grid: Grid2D) -> "Field2D":
        nx, ny = grid.n_x, grid.n_y
        return cls(np.zeros((nx, ny)), np.zeros((nx + 1, ny + 1)),
                   np.zeros((nx + 1, ny)), np.zeros((nx, ny + 1)))


@dataclass
class BoundaryRule:
    """How ghost cells are filled.

    ``periodic`` wraps, ``copy`` extrapolates with zeroth order, and ``static``
    freezes the ghost DoFs at the values given in ``ghost`` (1D only), which is
    what hydrostatic runs need: a copied constant ghost state is not in
    equilibrium and would feed waves into the domain.
    """

    kind: str = "copy"
    ghost: Optional[Field1D] = None

    def __post_init__(self):
        if self.kind not in BOUNDARY_KINDS:
            raise GridError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "static" and self.ghost is None:
            raise GridError("static boundary needs ghost data; use BoundaryRule.static()")

    @classmethod
    def static(cls, extended: Field1D) -> "BoundaryRule":
        """Freeze ghosts from a field sampled on ``grid.extended(depth)``."""
        return cls("static", extended)


def locate_cell(grid: Grid1D, x):
    """Index of the cell containing ``x``; interfaces resolve to the left cell.

    Accepts one ghost layer on each side (results ``-1`` and ``n_cells``).
    """
    x = np.asarray(x, dtype=float)
    lo = grid.x_min - grid.dx
    hi = grid.x_max + grid.dx
    if np.any(x < lo - 1e-12 * grid.dx) or np.any(x > hi + 1e-12 * grid.dx):
        raise GridError(f"x outside [{lo}, {hi}]")
    idx = np.ceil((x - grid.x_min) / grid.dx).astype(int) - 1
    idx = np.clip(idx, -1, grid.n_cells)
    return int(idx) if idx.ndim == 0 else idx


def resolve_index(count: int, rule: BoundaryRule | str, raw, points: bool = False):
    """Map a raw (possibly ghost) index onto a storage slot.

    ``count`` is the number of cells along the axis.  With ``points=True`` the
    index addresses the ``count + 1`` interface slots; under periodicity slot 0
    and slot ``count`` are the same interface, so wrapping is modulo ``count``
    while valid slots map to themselves.
    """
    kind = rule if isinstance(rule, str) else rule.kind
    raw = np.asarray(raw)
    if points:
        if kind == "periodic":
            out = np.where(raw < 0, raw + count, np.where(raw > count, raw - count, raw))
        else:
            out = np.clip(raw, 0, count)
    else:
        if kind == "periodic":
            out = np.mod(raw, count)
        else:
            out = np.clip(raw, 0, count - 1)
    return int(out) if out.ndim == 0 else out


def pad_1d(field: Field1D, rule: BoundaryRule, depth: int = GHOST_DEPTH):
    """Averages ``(m, n+2d)`` for cells ``-d..n+d-1`` and points ``(m, n+1+2d)``."""
    n = field.n_cells
    cells = resolve_index(n, rule, np.arange(-depth, n + depth))
    pts = resolve_index(n, rule, np.arange(-depth, n + 1 + depth), points=True)
    avg_pad = field.averages[:, cells]
    pts_pad = field.points[:, pts]
    if rule.kind == "static":
        g = rule.ghost
        gd = (g.n_cells - n) // 2
        if gd < depth or g.m != field.m:
            raise GridError("static ghost data too shallow for the stencil")
        s = gd - depth
        avg_pad[:, :depth] = g.averages[:, s:s + depth]
        avg_pad[:, n + depth:] = g.averages[:, gd + n:gd + n + depth]
        pts_pad[:, :depth] = g.points[:, s:s + depth]
        pts_pad[:, n + 1 + depth:] = g.points[:, gd + n + 1:gd + n + 1 + depth]
    return avg_pad, pts_pad


def pad_2d(field: Field2D, rule: BoundaryRule, depth: int = GHOST_DEPTH):
    """Ghost-padded copies of all four 2D arrays (same depth on every axis)."""
    if rule.kind == "static":
        raise GridError("static boundaries are 1D only")
    nx, ny = field.shape
    cx = resolve_index(nx, rule, np.arange(-depth, nx + depth))
    cy = resolve_index(ny, rule, np.arange(-depth, ny + depth))
    px = resolve_index(nx, rule, np.arange(-depth, nx + 1 + depth), points=True)
    py = resolve_index(ny, rule, np.arange(-depth, ny + 1 + depth), points=True)
    return (field.averages[np.ix_(cx, cy)], field.nodes[np.ix_(px, py)],
            field.edges_v[np.ix_(px, cy)], field.edges_h[np.ix_(cx, py)])


def enforce_periodic_1d(field: Field1D) -> None:
    field.points[:, -1] = field.points[:, 0]


def enforce_periodic_2d(field: Field2D) -> None:
    field.nodes[-1, :] = field.nodes[0, :]
    field.nodes[:, -1] = field.nodes[:, 0]
    field.edges_v[-1, :] = field.edges_v[0, :]
    field.edges_h[:, -1] = field.edges_h[:, 0]
