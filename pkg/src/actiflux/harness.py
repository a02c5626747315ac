"""Scenario execution, error norms, EOC tables and polynomial test oracles.

A :class:`Scenario` holds every parameter of one experiment.  ``run_scenario``
builds the grid, the equation and the initial data, runs the time loop and
measures errors against the exact solution where one is available.  The
convergence driver sweeps ``n_cells`` with all other parameters fixed.
"""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .equations import (AcousticsParams, Advection2DSpec, BlowUpError, ParameterError,
                        ScalarSource, make_acoustics_gravity, make_advection_1d)
from .evolution import EVOLUTION_MODES, CflError, Rk2Options, advect_exact
from .grid import BOUNDARY_KINDS, BoundaryRule, Field1D, Field2D, Grid1D, Grid2D
from .oracles import OracleAccuracyError, VelocityData, riemann_exact, solution_breakpoints
from .update import cfl_dt, step_1d, step_2d
from .wellbalance import (add_pressure_perturbation, cell_averages, init_isentropic,
                          init_parabola, isentropic_profile)

EQUATIONS = ("advection", "advection2d", "acoustics")
SOURCES = ("none", "linear", "power")
DRIFT_NORMS = ("linf", "l1")
ERROR_NORMS = ("l1_avg", "l1_point", "linf_point")

# parameters of every initial-data family, with defaults
INITIAL_DATA = {
    "gaussian": {"amplitude": 1.0, "width": 100.0, "center": 0.3, "center_y": 0.5},
    "parabola": {"a1": 17.0, "a2": -3.0, "a3": 1.0},
    "isentropic": {"k": 1.0, "gamma": 1.4, "rho0": 100.0,
                   "perturbation": 0.0, "perturbation_width": 100.0},
    "riemann": {"rho": 3.5, "p": 1.5, "v_inner": 1.0, "v_outer": 3.0,
                "left": 0.25, "right": 0.75},
}

_GL5_NODES, _GL5_WEIGHTS = np.polynomial.legendre.leggauss(5)
_EPS = 1e-12


class ScenarioError(ValueError):
    """Invalid scenario parameter; the message names the field."""


class RunError(RuntimeError):
    """A numerical guard tripped during a run."""


@dataclass(frozen=True)
class Scenario:
    name: str = "run"
    equation: str = "advection"
    u: float = 1.0
    u_y: float = 0.0
    source: str = "none"
    kappa: float = 0.0
    power: float = 3.0
    c: float = 1.0
    g: float = 0.0
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0
    n_cells: int = 100
    n_y: Optional[int] = None
    cfl: float = 0.9
    t_end: float = 0.0
    n_steps: Optional[int] = None
    boundary: str = "copy"
    evolution: str = "rk2"
    alpha: float = 0.5
    well_balanced: bool = False
    window: Optional[tuple[float, float]] = None
    window_y: Optional[tuple[float, float]] = None
    initial: str = "gaussian"
    init_params: dict = field(default_factory=dict)
    snapshot_times: tuple[float, ...] = ()
    drift: bool = False
    drift_norm: str = "linf"

    def __post_init__(self):
        def bad(name, msg):
            raise ScenarioError(f"{name}: {msg}")

        if self.equation not in EQUATIONS:
            bad("equation", f"must be one of {EQUATIONS}, got {self.equation!r}")
        if self.source not in SOURCES:
            bad("source", f"must be one of {SOURCES}, got {self.source!r}")
        if self.source == "power" and self.power == 1.0:
            bad("power", "must differ from 1 (use source = linear)")
        if not self.c > 0:
            bad("c", "must be positive")
        if not self.x_max > self.x_min:
            bad("x_max", "must exceed x_min")
        if self.equation == "advection2d" and not self.y_max > self.y_min:
            bad("y_max", "must exceed y_min")
        if self.n_cells < 3:
            bad("n_cells", "must be at least 3")
        if self.n_y is not None and self.n_y < 3:
            bad("n_y", "must be at least 3")
        if not 0.0 < self.cfl <= 1.0:
            bad("cfl", f"must lie in (0, 1], got {self.cfl}")
        if not self.t_end >= 0.0:
            bad("t_end", "must be nonnegative")
        if self.n_steps is not None and self.n_steps < 0:
            bad("n_steps", "must be nonnegative")
        if self.boundary not in BOUNDARY_KINDS:
            bad("boundary", f"must be one of {BOUNDARY_KINDS}")
        if self.boundary == "static" and self.equation == "advection2d":
            bad("boundary", "static boundaries are available in 1D only")
        if self.evolution not in EVOLUTION_MODES:
            bad("evolution", f"must be one of {EVOLUTION_MODES}")
        if self.evolution == "exact" and self.equation == "acoustics":
            bad("evolution", "exact evolution is only available for advection")
        if not 0.0 < self.alpha < 1.0:
            bad("alpha", "must lie in (0, 1)")
        if self.drift_norm not in DRIFT_NORMS:
            bad("drift_norm", f"must be one of {DRIFT_NORMS}")
        if self.initial not in INITIAL_DATA:
            bad("initial", f"must be one of {tuple(INITIAL_DATA)}")
        if self.equation == "acoustics" and self.initial == "gaussian":
            bad("initial", "acoustics needs parabola, isentropic or riemann data")
        if self.equation != "acoustics" and self.initial != "gaussian":
            bad("initial", "advection runs use gaussian data")
        unknown = set(self.init_params) - set(INITIAL_DATA[self.initial])
        if unknown:
            bad("initial", f"unknown parameters {sorted(unknown)} for {self.initial!r}")
        for name, win, lo, hi in (("window", self.window, self.x_min, self.x_max),
                                  ("window_y", self.window_y, self.y_min, self.y_max)):
            if win is None:
                continue
            a, b = win
            if not (lo - _EPS <= a < b <= hi + _EPS):
                bad(name, f"[{a}, {b}] must lie inside [{lo}, {hi}]")
        for t in self.snapshot_times:
            if t < 0:
                bad("snapshot_times", "must be nonnegative")

    @property
    def params(self) -> dict:
        """Initial-data parameters with defaults filled in."""
        return {**INITIAL_DATA[self.initial], **self.init_params}

    @property
    def names(self) -> tuple[str, ...]:
        return ("rho", "v", "p") if self.equation == "acoustics" else ("q",)

    @property
    def is_2d(self) -> bool:
        return self.equation == "advection2d"

    @property
    def window_bounds(self) -> tuple[float, float]:
        return self.window if self.window is not None else (self.x_min, self.x_max)

    @property
    def window_y_bounds(self) -> tuple[float, float]:
        if self.window_y is not None:
            return self.window_y
        if self.window is not None:
            return self.window
        return (self.y_min, self.y_max)


# ----------------------------------------------------------------- building

def build_grid(sc: Scenario) -> Grid1D | Grid2D:
    if sc.is_2d:
        return Grid2D(sc.x_min, sc.x_max, sc.y_min, sc.y_max, sc.n_cells,
                      sc.n_y if sc.n_y is not None else sc.n_cells)
    return Grid1D(sc.x_min, sc.x_max, sc.n_cells)


def build_source(sc: Scenario) -> ScalarSource:
    if sc.source == "none":
        return ScalarSource()
    if sc.source == "linear":
        return ScalarSource("linear", sc.kappa)
    return ScalarSource("power", sc.kappa, sc.power)


def build_equation(sc: Scenario):
    if sc.equation == "acoustics":
        return make_acoustics_gravity(AcousticsParams(sc.c, sc.g))
    if sc.equation == "advection2d":
        return Advection2DSpec((sc.u, sc.u_y), build_source(sc))
    return make_advection_1d(sc.u, build_source(sc))


def build_options(sc: Scenario) -> Rk2Options:
    return Rk2Options(alpha=sc.alpha, well_balanced=sc.well_balanced, mode=sc.evolution)


def gaussian_profile(sc: Scenario) -> Callable:
    p = sc.params
    if sc.is_2d:
        return lambda x, y: p["amplitude"] * np.exp(
            -p["width"] * ((x - p["center"]) ** 2 + (y - p["center_y"]) ** 2))
    return lambda x: p["amplitude"] * np.exp(-p["width"] * (x - p["center"]) ** 2)


def riemann_data(sc: Scenario) -> VelocityData:
    p = sc.params
    return VelocityData.piecewise([p["left"], p["right"]],
                                  [p["v_outer"], p["v_inner"], p["v_outer"]])


def cell_averages_2d(grid: Grid2D, f) -> np.ndarray:
    """5x5 Gauss-Legendre averages of ``f(x, y)`` over every cell."""
    X = grid.x_centers[:, None, None, None] + 0.5 * grid.dx * _GL5_NODES[None, None, :, None]
    Y = grid.y_centers[None, :, None, None] + 0.5 * grid.dy * _GL5_NODES[None, None, None, :]
    w = _GL5_WEIGHTS[:, None] * _GL5_WEIGHTS[None, :]
    return 0.25 * (f(X, Y) * w).sum(axis=(2, 3))


def field_from_function_2d(grid: Grid2D, f) -> Field2D:
    xi, yi = grid.x_interfaces, grid.y_interfaces
    xc, yc = grid.x_centers, grid.y_centers
    return Field2D(cell_averages_2d(grid, f), f(xi[:, None], yi[None, :]),
                   f(xi[:, None], yc[None, :]), f(xc[:, None], yi[None, :]))


def piecewise_cell_averages(grid: Grid1D, edges, values) -> np.ndarray:
    """Exact averages of piecewise constant data (``values[k]`` between
    ``edges[k-1]`` and ``edges[k]``)."""
    lo = grid.centers - 0.5 * grid.dx
    hi = lo + grid.dx
    bounds = np.concatenate([[-np.inf], np.asarray(edges, float), [np.inf]])
    out = np.zeros_like(lo)
    for k, v in enumerate(values):
        overlap = np.clip(np.minimum(hi, bounds[k + 1]) - np.maximum(lo, bounds[k]), 0, None)
        out += v * overlap
    return out / grid.dx


def riemann_field(grid: Grid1D, sc: Scenario) -> Field1D:
    """Riemann data; a point value sitting on a jump takes the mean of both sides."""
    p = sc.params
    edges = [p["left"], p["right"]]
    values = [p["v_outer"], p["v_inner"], p["v_outer"]]
    x = grid.interfaces
    v_pts = riemann_data(sc).v0(x).astype(float)
    for e, (a, b) in zip(edges, ((values[0], values[1]), (values[1], values[2]))):
        v_pts[np.abs(x - e) <= _EPS * max(1.0, abs(e))] = 0.5 * (a + b)
    v_avg = piecewise_cell_averages(grid, edges, values)
    n = grid.n_cells
    averages = np.stack([np.full(n, p["rho"]), v_avg, np.full(n, p["p"])])
    points = np.stack([np.full(n + 1, p["rho"]), v_pts, np.full(n + 1, p["p"])])
    return Field1D(averages, points)


def initial_field(sc: Scenario, grid) -> Field1D | Field2D:
    p = sc.params
    if sc.is_2d:
        return field_from_function_2d(grid, gaussian_profile(sc))
    if sc.initial == "gaussian":
        f = gaussian_profile(sc)
        return Field1D(cell_averages(grid, f)[None, :], f(grid.interfaces)[None, :])
    if sc.initial == "parabola":
        return init_parabola(grid, p["a1"], p["a2"], p["a3"], sc.g)
    if sc.initial == "isentropic":
        base = init_isentropic(grid, p["k"], p["gamma"], p["rho0"], sc.g)
        return add_pressure_perturbation(grid, base, p["perturbation"],
                                         p["perturbation_width"])
    return riemann_field(grid, sc)


def boundary_rule(sc: Scenario, grid) -> BoundaryRule:
    if sc.boundary == "static":
        return BoundaryRule.static(initial_field(sc, grid.extended()))
    return BoundaryRule(sc.boundary)


def exact_solution(sc: Scenario) -> Optional[Callable]:
    """``exact(t)`` returning an evaluator ``x -> (m, ...)`` (``(x, y) -> ...`` in
    2D), or None if no closed form is known."""
    p = sc.params
    if sc.initial == "gaussian":
        q0 = gaussian_profile(sc)
        src = build_source(sc)
        if sc.is_2d:
            return lambda t: (lambda x, y: advect_exact(q0, (sc.u, sc.u_y), src, t, (x, y)))
        return lambda t: (lambda x: advect_exact(q0, (sc.u,), src, t, x)[None, ...])
    if sc.initial == "parabola":
        def parabola(x):
            x = np.asarray(x, dtype=float)
            return np.stack([(2 * p["a1"] * x + p["a2"]) / sc.g, np.zeros_like(x),
                             p["a1"] * x ** 2 + p["a2"] * x + p["a3"]])
        return lambda t: parabola
    if sc.initial == "isentropic":
        if p["perturbation"] != 0.0:
            return None
        prof = isentropic_profile(p["k"], p["gamma"], p["rho0"], sc.g)
        return lambda t: prof
    data = riemann_data(sc)

    def riemann_at(t):
        def f(x):
            x = np.asarray(x, dtype=float)
            out = np.empty((3,) + x.shape)
            for idx, xx in np.ndenumerate(x):
                out[(slice(None),) + idx] = riemann_exact(p["rho"], p["p"], data, sc.c,
                                                         sc.g, t, xx)
            return out
        return f

    return riemann_at


def exact_breakpoints(sc: Scenario, t: float) -> list[float]:
    if sc.initial != "riemann":
        return []
    return solution_breakpoints(riemann_data(sc), sc.c, t)


# ------------------------------------------------------------------- norms

@dataclass(frozen=True)
class ErrorNorms:
    """Per-variable norms; ``total`` combines them (sums for L1, max for Linf)."""

    l1_avg: np.ndarray
    l1_point: np.ndarray
    linf_point: np.ndarray

    def total(self) -> tuple[float, float, float]:
        return (float(np.sum(self.l1_avg)), float(np.sum(self.l1_point)),
                float(np.max(self.linf_point)))

    def get(self, norm: str, var: Optional[int] = None) -> float:
        if norm not in ERROR_NORMS:
            raise ValueError(f"unknown norm {norm!r}")
        if var is None:
            return self.total()[ERROR_NORMS.index(norm)]
        return float(getattr(self, norm)[var])


def _window_masks_1d(grid: Grid1D, window):
    a, b = window
    lo = grid.centers - 0.5 * grid.dx
    tol = _EPS * max(1.0, abs(a), abs(b))
    cells = (lo >= a - tol) & (lo + grid.dx <= b + tol)
    x = grid.interfaces
    pts = (x >= a - tol) & (x <= b + tol)
    return cells, pts


def exact_cell_averages(grid: Grid1D, f, breakpoints: Sequence[float] = ()) -> np.ndarray:
    """Gauss averages of ``f``; cells containing a breakpoint are split there."""
    out = np.atleast_2d(cell_averages(grid, f))
    lo = grid.centers - 0.5 * grid.dx
    for bp in breakpoints:
        inside = np.nonzero((lo < bp - _EPS) & (lo + grid.dx > bp + _EPS))[0]
        for i in inside:
            cuts = sorted({lo[i], lo[i] + grid.dx,
                           *[b for b in breakpoints if lo[i] < b < lo[i] + grid.dx]})
            total = 0.0
            for a, b in zip(cuts[:-1], cuts[1:]):
                xs = 0.5 * (a + b) + 0.5 * (b - a) * _GL5_NODES
                vals = np.atleast_2d(np.asarray(f(xs), dtype=float))
                total = total + 0.5 * (b - a) * (vals * _GL5_WEIGHTS).sum(axis=-1)
            out[:, i] = total / grid.dx
    return out


def error_norms(grid, field, exact: Callable, window=None, window_y=None,
                breakpoints: Sequence[float] = ()) -> ErrorNorms:
    """L1 of averages, L1 and Linf of point values inside ``window``.

    Averages are compared with 5-point Gauss averages of ``exact`` over the
    cells lying entirely in the window.  In 2D the point norms use the nodes.
    """
    if isinstance(grid, Grid2D):
        return _error_norms_2d(grid, field, exact, window, window_y)
    window = window if window is not None else (grid.x_min, grid.x_max)
    cells, pts = _window_masks_1d(grid, window)
    ex_avg = exact_cell_averages(grid, exact, breakpoints)
    ex_pts = np.atleast_2d(np.asarray(exact(grid.interfaces), dtype=float))
    d_avg = np.abs(field.averages - ex_avg)[:, cells]
    d_pts = np.abs(field.points - ex_pts)[:, pts]
    return ErrorNorms(grid.dx * d_avg.sum(axis=1), grid.dx * d_pts.sum(axis=1),
                      d_pts.max(axis=1) if d_pts.size else np.zeros(field.m))


def _error_norms_2d(grid: Grid2D, field: Field2D, exact, window, window_y) -> ErrorNorms:
    wx = window if window is not None else (grid.x_min, grid.x_max)
    wy = window_y if window_y is not None else (
        window if window is not None else (grid.y_min, grid.y_max))
    cx, px = _window_masks_1d(Grid1D(grid.x_min, grid.x_max, grid.n_x), wx)
    cy, py = _window_masks_1d(Grid1D(grid.y_min, grid.y_max, grid.n_y), wy)
    ex_avg = cell_averages_2d(grid, exact)
    ex_nodes = exact(grid.x_interfaces[:, None], grid.y_interfaces[None, :])
    d_avg = np.abs(field.averages - ex_avg)[np.ix_(cx, cy)]
    d_nodes = np.abs(field.nodes - ex_nodes)[np.ix_(px, py)]
    area = grid.dx * grid.dy
    return ErrorNorms(np.array([area * d_avg.sum()]), np.array([area * d_nodes.sum()]),
                      np.array([d_nodes.max() if d_nodes.size else 0.0]))


def reference_norms(grid: Grid1D, field: Field1D, ref_grid: Grid1D, ref_field: Field1D,
                    window=None) -> ErrorNorms:
    """Norms against a finer run on a nested grid (same domain, n_ref = r n)."""
    r, rem = divmod(ref_grid.n_cells, grid.n_cells)
    if rem or r < 1 or not (np.isclose(ref_grid.x_min, grid.x_min)
                            and np.isclose(ref_grid.x_max, grid.x_max)):
        raise ValueError("reference grid must nest the coarse grid")
    window = window if window is not None else (grid.x_min, grid.x_max)
    cells, pts = _window_masks_1d(grid, window)
    ref_avg = ref_field.averages.reshape(ref_field.m, grid.n_cells, r).mean(axis=2)
    ref_pts = ref_field.points[:, ::r]
    d_avg = np.abs(field.averages - ref_avg)[:, cells]
    d_pts = np.abs(field.points - ref_pts)[:, pts]
    return ErrorNorms(grid.dx * d_avg.sum(axis=1), grid.dx * d_pts.sum(axis=1),
                      d_pts.max(axis=1))


def eoc(errors: Sequence[tuple[float, float]]) -> list[float]:
    """Orders between consecutive ``(dx, error)`` entries.

    ``log(e_{k-1}/e_k) / log(dx_{k-1}/dx_k)``; NaN where an error is zero.
    """
    out = []
    for (dx0, e0), (dx1, e1) in zip(errors[:-1], errors[1:]):
        if e0 <= 0.0 or e1 <= 0.0 or dx0 == dx1:
            out.append(math.nan)
        else:
            out.append(math.log(e0 / e1) / math.log(dx0 / dx1))
    return out


# --------------------------------------------------------- polynomial oracles

ANSATZ_1D = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (1, 2))
ANSATZ_2D = tuple(sorted(
    [(a, b, c) for a in range(3) for b in range(3) for c in range(3) if a + b + c <= 4]
    + [(2, 1, 2), (1, 2, 2)]))


def _centered_moment(k: int, h: float) -> float:
    # mean of x^k over [-h/2, h/2]
    return 0.0 if k % 2 else (0.5 * h) ** k / (k + 1)


@dataclass(frozen=True)
class SpaceTimeSamples:
    """Exact space-time average of a polynomial and the data a quadrature sees.

    ``values`` are ordered like the inputs of the source quadratures (without
    the centre value); ``initial_average`` is the cell average at t = 0 and
    ``center`` the value at the cell centre at t = 0.
    """

    average: float
    initial_average: float
    center: float
    values: tuple[float, ...]


def spacetime_poly_oracle_1d(coeffs: Sequence[float], dx: float, dt: float) -> SpaceTimeSamples:
    """Polynomial ``a0 + a1 x + a2 t + a3 x^2 + a4 x t + a5 t^2 + a6 x t^2`` on
    ``[-dx/2, dx/2] x [0, dt]``."""
    a = np.asarray(coeffs, dtype=float)
    if a.shape != (len(ANSATZ_1D),):
        raise ValueError(f"need {len(ANSATZ_1D)} coefficients")

    def q(x, t):
        return sum(c * x ** i * t ** k for c, (i, k) in zip(a, ANSATZ_1D))

    average = sum(c * _centered_moment(i, dx) * dt ** k / (k + 1)
                  for c, (i, k) in zip(a, ANSATZ_1D))
    initial = sum(c * _centered_moment(i, dx) for c, (i, k) in zip(a, ANSATZ_1D) if k == 0)
    values = []
    for t in (0.0, 0.5 * dt, dt):
        values += [q(-0.5 * dx, t), q(0.5 * dx, t)]
    return SpaceTimeSamples(float(average), float(initial), float(q(0.0, 0.0)),
                            tuple(float(v) for v in values))


def spacetime_poly_oracle_2d(coeffs: Sequence[float], dx: float, dy: float,
                             dt: float) -> SpaceTimeSamples:
    """Polynomial with the exponents in ``ANSATZ_2D`` (each exponent at most 2,
    total degree at most 4, plus ``x^2 y t^2`` and ``x y^2 t^2``) on
    ``[-dx/2, dx/2] x [-dy/2, dy/2] x [0, dt]``.

    ``values`` lists, per time level, the edges W, E, S, N and then the nodes
    SW, SE, NW, NE.
    """
    a = np.asarray(coeffs, dtype=float)
    if a.shape != (len(ANSATZ_2D),):
        raise ValueError(f"need {len(ANSATZ_2D)} coefficients")

    def q(x, y, t):
        return sum(c * x ** i * y ** j * t ** k for c, (i, j, k) in zip(a, ANSATZ_2D))

    average = sum(c * _centered_moment(i, dx) * _centered_moment(j, dy) * dt ** k / (k + 1)
                  for c, (i, j, k) in zip(a, ANSATZ_2D))
    initial = sum(c * _centered_moment(i, dx) * _centered_moment(j, dy)
                  for c, (i, j, k) in zip(a, ANSATZ_2D) if k == 0)
    hx, hy = 0.5 * dx, 0.5 * dy
    places = ((-hx, 0.0), (hx, 0.0), (0.0, -hy), (0.0, hy),
              (-hx, -hy), (hx, -hy), (-hx, hy), (hx, hy))
    values = [q(x, y, t) for t in (0.0, 0.5 * dt, dt) for x, y in places]
    return SpaceTimeSamples(float(average), float(initial), float(q(0.0, 0.0, 0.0)),
                            tuple(float(v) for v in values))


# ----------------------------------------------------------------- running

@dataclass
class RunRecord:
    scenario: Scenario
    grid: Grid1D | Grid2D
    initial: Field1D | Field2D
    final: Field1D | Field2D
    t: float
    steps: int
    snapshots: list = field(default_factory=list)
    drift: Optional[np.ndarray] = None
    errors: Optional[ErrorNorms] = None
    seconds: float = 0.0


def _drift_row(sc: Scenario, grid, initial, current, t):
    if sc.is_2d:
        d = np.abs(current.nodes - initial.nodes)
        err = [d.max() if sc.drift_norm == "linf" else d.sum() * grid.dx * grid.dy]
    else:
        _, pts = _window_masks_1d(grid, sc.window_bounds)
        d = np.abs(current.points - initial.points)[:, pts]
        err = d.max(axis=1) if sc.drift_norm == "linf" else d.sum(axis=1) * grid.dx
    return [t, *map(float, err)]


def _finite(field) -> bool:
    arrays = ((field.averages, field.points) if isinstance(field, Field1D)
              else (field.averages, field.nodes, field.edges_v, field.edges_h))
    return all(np.all(np.isfinite(a)) for a in arrays)


def run_scenario(sc: Scenario, out_dir: Optional[str | Path] = None) -> RunRecord:
    """Run one scenario; writes CSV output when ``out_dir`` is given.

    Between consecutive output times (snapshots and ``t_end``) the run takes
    the fewest equal steps that do not exceed ``cfl_dt``, so it lands exactly
    on every output time without a short final step.  With ``n_steps`` set, exactly that many
    full steps are taken and ``t_end`` is ignored.
    """
    start = time.perf_counter()
    grid = build_grid(sc)
    eq = build_equation(sc)
    opts = build_options(sc)
    try:
        field0 = initial_field(sc, grid)
        rule = boundary_rule(sc, grid)
    except (ValueError, ArithmeticError) as exc:
        raise RunError(f"{sc.name}: cannot build initial data: {exc}") from exc

    lam = max(abs(sc.u), abs(sc.u_y)) if sc.equation != "acoustics" else eq.max_speed
    if lam > 0:
        dt = cfl_dt(grid, lam, sc.cfl)
    elif sc.n_steps or sc.t_end > 0:
        # pure source dynamics: any step is admissible, take the domain scale
        dt = sc.cfl * min(grid.dx, getattr(grid, "dy", grid.dx))
    else:
        dt = 0.0
    if sc.n_steps is not None:
        t_end = sc.n_steps * dt
        stops = [sc.n_steps * dt]
    else:
        t_end = sc.t_end
        stops = sorted({t for t in sc.snapshot_times if t < t_end} | {t_end})
    stepper = step_2d if sc.is_2d else step_1d

    f = field0
    t, steps = 0.0, 0
    snapshots = []
    drift = [_drift_row(sc, grid, field0, field0, 0.0)] if sc.drift else None
    for stop in stops:
        while True:
            if sc.n_steps is not None:
                if steps >= sc.n_steps:
                    break
                h = dt
            else:
                remaining = stop - t
                if remaining <= _EPS * max(1.0, stop):
                    break
                # equal steps up to the next stop, none larger than dt
                h = remaining / math.ceil(remaining / dt * (1.0 - _EPS))
            try:
                f = stepper(grid, f, rule, eq, opts, h)
            except (CflError, BlowUpError, ParameterError, OracleAccuracyError) as exc:
                raise RunError(f"{sc.name}: step {steps + 1} at t={t:g}: {exc}") from exc
            steps += 1
            t += h
            if not _finite(f):
                raise RunError(f"{sc.name}: non-finite values after step {steps}, t={t:g}")
            if drift is not None:
                drift.append(_drift_row(sc, grid, field0, f, t))
        t = stop
        snapshots.append((stop, f))

    errors = None
    exact = exact_solution(sc)
    if exact is not None:
        try:
            errors = error_norms(grid, f, exact(t), sc.window, sc.window_y,
                                 exact_breakpoints(sc, t))
        except (OracleAccuracyError, ValueError) as exc:
            raise RunError(f"{sc.name}: exact solution failed: {exc}") from exc

    record = RunRecord(sc, grid, field0, f, t, steps, snapshots,
                       np.array(drift) if drift is not None else None, errors,
                       time.perf_counter() - start)
    if out_dir is not None:
        write_run(record, out_dir)
    return record


@dataclass
class ErrorReport:
    """Rows ``(n_cells, dx, norms)``; EOC columns use ``eoc_norm``."""

    rows: list = field(default_factory=list)
    names: tuple[str, ...] = ("q",)
    eoc_norm: str = "l1_avg"

    def column(self, norm: Optional[str] = None, var: Optional[int] = None) -> list[float]:
        norm = norm or self.eoc_norm
        return [r[2].get(norm, var) for r in self.rows]

    def eoc(self, norm: Optional[str] = None, var: Optional[int] = None) -> list[float]:
        return eoc([(r[1], e) for r, e in zip(self.rows, self.column(norm, var))])


def convergence(sc: Scenario, grids: Sequence[int], reference: Optional[int] = None,
                eoc_norm: str = "l1_avg") -> ErrorReport:
    """Sweep ``n_cells``; errors against the exact solution or, if ``reference``
    is given, against a run with that many cells."""
    if eoc_norm not in ERROR_NORMS:
        raise ScenarioError(f"eoc_norm: must be one of {ERROR_NORMS}")
    grids = list(grids)
    if any(b <= a for a, b in zip(grids[:-1], grids[1:])):
        raise ScenarioError("grids: must be strictly increasing")
    ref = None
    if reference is not None:
        if sc.is_2d:
            raise ScenarioError("reference: self-convergence is 1D only")
        if any(reference % n for n in grids):
            raise ScenarioError("reference: must be a multiple of every grid size")
        ref = run_scenario(replace(sc, n_cells=reference, drift=False, snapshot_times=()))
    elif exact_solution(sc) is None:
        raise ScenarioError("initial: no exact solution; give a reference resolution")
    report = ErrorReport(names=sc.names, eoc_norm=eoc_norm)
    for n in grids:
        rec = run_scenario(replace(sc, n_cells=n, drift=False, snapshot_times=()))
        if ref is not None:
            norms = reference_norms(rec.grid, rec.final, ref.grid, ref.final, sc.window)
        else:
            norms = rec.errors
        report.rows.append((n, rec.grid.dx, norms))
    return report


# ----------------------------------------------------------------- writing

def _fmt(v) -> str:
    return repr(float(v))


def write_rows(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if not isinstance(v, str) else v for v in row])


def write_snapshot(out_dir: Path, stem: str, grid, fld, names: Sequence[str]) -> list[Path]:
    out_dir = Path(out_dir)
    if isinstance(grid, Grid2D):
        path = out_dir / f"{stem}_avg.csv"
        X, Y = np.meshgrid(grid.x_centers, grid.y_centers, indexing="ij")
        write_rows(path, ("x", "y", "q_avg"),
                    zip(X.ravel(), Y.ravel(), fld.averages.ravel()))
        return [path]
    avg_path = out_dir / f"{stem}_avg.csv"
    pts_path = out_dir / f"{stem}_points.csv"
    write_rows(avg_path, ("x", *[f"{n}_avg" for n in names]),
                zip(grid.centers, *fld.averages))
    write_rows(pts_path, ("x", *[f"{n}_point" for n in names]),
                zip(grid.interfaces, *fld.points))
    return [avg_path, pts_path]


def write_drift(path: Path, drift: np.ndarray, names: Sequence[str]) -> None:
    write_rows(Path(path), ("t", *[f"err_{n}" for n in names]), drift)


def write_errors(path: Path, report: ErrorReport, var: Optional[int] = None) -> None:
    orders = [math.nan] + report.eoc(var=var)
    rows = []
    for (n, dx, norms), order in zip(report.rows, orders):
        vals = [norms.get(k, var) for k in ERROR_NORMS]
        rows.append([str(n), _fmt(dx), *map(_fmt, vals), "" if math.isnan(order) else _fmt(order)])
    write_rows(Path(path), ("n_cells", "dx", *ERROR_NORMS, "eoc"), rows)


def write_report(out_dir: Path, report: ErrorReport) -> list[Path]:
    """``errors.csv`` (all variables combined) plus one file per variable."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [out_dir / "errors.csv"]
    write_errors(paths[0], report)
    if len(report.names) > 1:
        for k, name in enumerate(report.names):
            paths.append(out_dir / f"errors_{name}.csv")
            write_errors(paths[-1], report, var=k)
    return paths


def write_run(record: RunRecord, out_dir) -> list[Path]:
    sc = record.scenario
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = write_snapshot(out_dir, f"{sc.name}_initial", record.grid, record.initial,
                           sc.names)
    for t, fld in record.snapshots:
        paths += write_snapshot(out_dir, f"{sc.name}_t{t:.6g}", record.grid, fld, sc.names)
    if record.drift is not None:
        paths.append(out_dir / f"{sc.name}_drift.csv")
        write_drift(paths[-1], record.drift, sc.names)
    return paths


PLOT_TEMPLATE = '''\
# Companion plotting script; run it next to the CSV files.
import glob
import sys

import matplotlib.pyplot as plt
import numpy as np

for path in sorted(glob.glob(sys.argv[1] if len(sys.argv) > 1 else "*.csv")):
    data = np.genfromtxt(path, delimiter=",", names=True)
    cols = data.dtype.names
    fig, ax = plt.subplots()
    if cols[0] == "n_cells":
        ax.loglog(data["dx"], data["l1_avg"], "o-", label="L1 (averages)")
        ax.loglog(data["dx"], data["l1_point"], "s-", label="L1 (points)")
        ax.set_xlabel("dx")
    elif cols[0] == "t":
        for c in cols[1:]:
            ax.semilogy(data["t"], np.abs(data[c]) + 1e-300, label=c)
        ax.set_xlabel("t")
    elif len(cols) > 2 and cols[1] == "y":
        continue
    else:
        for c in cols[1:]:
            ax.plot(data[cols[0]], data[c], ".", label=c)
        ax.set_xlabel(cols[0])
    ax.legend()
    fig.savefig(path.replace(".csv", ".png"), dpi=120)
    plt.close(fig)
'''


def write_plot_template(out_dir) -> Path:
    path = Path(out_dir) / "plot_results.py"
    path.write_text(PLOT_TEMPLATE)
    return path
