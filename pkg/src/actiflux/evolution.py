"""Point-value evolution operators.

Two operators are available.  For scalar advection with a source that has a
closed-form flow the reconstruction is transported along the characteristic
and the source ODE is solved exactly.  In general a two-stage Runge-Kutta
evolution is used: every characteristic variable is transported to its foot
point, and the source is integrated with a predictor sampled at intermediate
foot points ``x - lambda_l t (1 - alpha) - lambda_k alpha t``.  The result
agrees with the exact evolution up to O(t^3).

For acoustics with gravity the Runge-Kutta operator produces a spurious
velocity ``-(alpha g^2 / 4) (rho_{i+1/2} - rho_{i-1/2}) / dx * t^3`` on
discrete hydrostatic data; ``wb_correction`` cancels it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _core
from .equations import Advection2DSpec, LinearSystem1D, ParameterError, ScalarSource
from .grid import (GHOST_DEPTH, BoundaryRule, Field1D, Field2D, Grid1D, Grid2D,
                   pad_1d, pad_2d)

EVOLUTION_MODES = ("rk2", "exact")

_CFL_SLACK = 1e-12


class CflError(ValueError):
    """Time step too large: a foot point leaves the neighbouring cells."""


@dataclass(frozen=True)
class Rk2Options:
    alpha: float = 0.5
    well_balanced: bool = False
    mode: str = "rk2"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.mode not in EVOLUTION_MODES:
            raise ParameterError(f"unknown evolution mode {self.mode!r}")


def advect_exact(q0: Callable, U, source: ScalarSource, t: float, position):
    """Exact solution of ``q_t + U . grad q = s(q)`` at ``position``.

    ``q0`` takes one coordinate array per spatial dimension.
    """
    if t < 0:
        raise ParameterError("t must be nonnegative")
    U = np.atleast_1d(np.asarray(U, dtype=float))
    pos = position if isinstance(position, (tuple, list)) else (position,)
    if len(pos) != len(U):
        raise ParameterError("position and velocity dimensions differ")
    foot = [np.asarray(p, dtype=float) - u * t for p, u in zip(pos, U)]
    return source.exact_flow(q0(*foot), t)


def rk2_shifts(speeds, alpha: float, t: float) -> list[float]:
    """Distinct upstream shifts ``x - foot`` the operator samples."""
    shifts = {float(lam * t) for lam in speeds}
    for lam_l in speeds:
        for lam_k in speeds:
            shifts.add(float(lam_l * t * (1.0 - alpha) + lam_k * alpha * t))
    return sorted(shifts)


def _rk2_combine(speeds, source_char, alpha: float, t: float, states: dict):
    """Runge-Kutta evolution given characteristic states ``states[shift]``."""
    m = len(speeds)
    src_cache = {}

    def src(shift):
        if shift not in src_cache:
            src_cache[shift] = source_char(states[shift])
        return src_cache[shift]

    rows = []
    for l in range(m):
        foot = float(speeds[l] * t)
        Qf = states[foot]
        Qstar = np.empty_like(Qf)
        for k in range(m):
            mid = float(speeds[l] * t * (1.0 - alpha) + speeds[k] * alpha * t)
            Qstar[k] = states[mid][k] + alpha * t * src(mid)[k]
        rows.append(Qf[l] + (1.0 - 1.0 / (2.0 * alpha)) * src(foot)[l] * t
                    + t / (2.0 * alpha) * source_char(Qstar)[l])
    return np.stack(rows)


def rk2_point_update(system: LinearSystem1D, Q0: Sequence[Callable], opts: Rk2Options,
                     t: float, x):
    """Runge-Kutta evolution of characteristic initial data ``Q0`` to ``(t, x)``.

    Returns the ``m`` characteristic values (stacked on axis 0).
    """
    if t < 0:
        raise ParameterError("t must be nonnegative")
    x = np.asarray(x, dtype=float)
    states = {s: np.stack([np.asarray(Qk(x - s), dtype=float) for Qk in Q0])
              for s in rk2_shifts(system.speeds, opts.alpha, t)}
    return _rk2_combine(system.speeds, system.source_char, opts.alpha, t, states)


def wb_correction(alpha: float, g: float, dx: float, rho_right, rho_left, t: float):
    """Velocity increment cancelling the Runge-Kutta drift on hydrostatic data."""
    return alpha * g * g / 4.0 * (np.asarray(rho_right) - rho_left) / dx * t ** 3


def _check_cfl_1d(t, speed, dx):
    if t * speed > dx * (1.0 + _CFL_SLACK):
        raise CflError(f"t * max|lambda| = {t * speed:g} exceeds dx = {dx:g}")


def evolve_points_1d(grid: Grid1D, field: Field1D, rule: BoundaryRule,
                     system: LinearSystem1D, opts: Rk2Options, t: float,
                     padded=None) -> np.ndarray:
    """Evolve every interface value by ``t``; returns conserved ``(m, n+1)``.

    ``padded`` may carry the ghost-padded arrays of ``field`` to avoid
    recomputing them.
    """
    if t == 0.0:
        return field.points.copy()
    _check_cfl_1d(t, system.max_speed, grid.dx)
    avg_pad, pts_pad = padded if padded is not None else pad_1d(field, rule)
    dx = grid.dx

    if opts.mode == "exact":
        src = system.scalar_source
        if system.m != 1 or src is None or not src.has_exact_flow:
            raise ParameterError("exact evolution needs scalar advection with a "
                                 "closed-form source")
        vals = _core.eval_interfaces_1d(avg_pad, pts_pad,
                                        np.array([-system.speeds[0] * t / dx]), GHOST_DEPTH)
        return src.exact_flow(vals[0], t)

    shifts = rk2_shifts(system.speeds, opts.alpha, t)
    offsets = -np.asarray(shifts) / dx
    if np.any(np.abs(offsets) > 1.0 + _CFL_SLACK):
        raise CflError("foot point outside the neighbouring cells")
    samples = _core.eval_interfaces_1d(avg_pad, pts_pad, offsets, GHOST_DEPTH)
    states = {s: system.char_of(samples[k]) for k, s in enumerate(shifts)}
    Q1 = _rk2_combine(system.speeds, system.source_char, opts.alpha, t, states)
    q1 = system.conserved_of(Q1)

    if opts.well_balanced and system.gravity is not None:
        d = GHOST_DEPTH
        n1 = field.n_cells + 1
        rho = pts_pad[system.density_index]
        q1[system.velocity_index] += wb_correction(
            opts.alpha, system.gravity, dx, rho[d:d + n1], rho[d - 1:d - 1 + n1], t)
    return q1


def evolve_point_1d(grid: Grid1D, field: Field1D, rule: BoundaryRule,
                    system: LinearSystem1D, index: int, opts: Rk2Options, t: float):
    """Evolved conserved state at interface slot ``index``."""
    return evolve_points_1d(grid, field, rule, system, opts, t)[:, index]


def _rk2_scalar(val, source, alpha, t):
    s0 = source(val)
    return (val + (1.0 - 1.0 / (2.0 * alpha)) * s0 * t
            + t / (2.0 * alpha) * source(val + alpha * t * s0))


def _axis_start(delta, interface_type):
    """Padded start cell and local coordinate for a uniform shift ``delta``."""
    if not interface_type:
        return GHOST_DEPTH, delta
    if delta <= 0.0:
        return GHOST_DEPTH - 1, delta + 0.5
    return GHOST_DEPTH, delta - 0.5


def evolve_points_2d(grid: Grid2D, field: Field2D, rule: BoundaryRule,
                     spec: Advection2DSpec, opts: Rk2Options, t: float, padded=None):
    """Evolve all nodes and edge midpoints; returns ``(nodes, edges_v, edges_h)``."""
    if t == 0.0:
        return field.nodes.copy(), field.edges_v.copy(), field.edges_h.copy()
    Ux, Uy = (float(u) for u in spec.U)
    if t * max(abs(Ux) / grid.dx, abs(Uy) / grid.dy) > 0.5 * (1.0 + _CFL_SLACK):
        raise CflError("2D foot point leaves the half-cell neighbourhood")
    A, Nd, Ev, Eh = padded if padded is not None else pad_2d(field, rule)
    dxs, dys = -Ux * t / grid.dx, -Uy * t / grid.dy
    nx, ny = field.shape
    out = []
    for x_iface, y_iface, px, py in ((True, True, nx + 1, ny + 1),
                                     (True, False, nx + 1, ny),
                                     (False, True, nx, ny + 1)):
        i0, xi = _axis_start(dxs, x_iface)
        j0, eta = _axis_start(dys, y_iface)
        val = _core.recon2d_block(A, Nd, Ev, Eh, i0, j0, px, py, xi, eta)
        if opts.mode == "exact":
            val = spec.source.exact_flow(val, t)
        elif spec.source.kind != "none":
            val = _rk2_scalar(val, spec.source, opts.alpha, t)
        out.append(val)
    return tuple(out)


def evolve_point_2d(grid: Grid2D, field: Field2D, rule: BoundaryRule,
                    spec: Advection2DSpec, location: tuple, opts: Rk2Options, t: float):
    """Evolved value at ``location = (kind, i, j)``, kind in node/edge_v/edge_h."""
    kind, i, j = location
    nodes, ev, eh = evolve_points_2d(grid, field, rule, spec, opts, t)
    return float({"node": nodes, "edge_v": ev, "edge_h": eh}[kind][i, j])
