"""Flux and source quadratures, time-step selection and the full time step.

The average update is the finite volume formula with a space-time Simpson
flux and a source quadrature that uses only the data Active Flux has:
interface values at ``t^n``, ``t^{n+1/2}``, ``t^{n+1}`` and the reconstruction
at the cell centre.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .equations import Advection2DSpec, LinearSystem1D
from .evolution import CflError, Rk2Options, evolve_points_1d, evolve_points_2d
from .grid import (BoundaryRule, Field1D, Field2D, Grid1D, Grid2D,
                   enforce_periodic_1d, enforce_periodic_2d, pad_1d, pad_2d)
from .reconstruction import recon1d_midpoint, recon2d_center

SIMPSON = (Fraction(1, 6), Fraction(4, 6), Fraction(1, 6))

# weights per interface value at (t^n, t^{n+1/2}, t^{n+1}) and for the centre
SOURCE_1D = {"n": Fraction(-3, 12), "half": Fraction(4, 12), "full": Fraction(1, 12),
             "center": Fraction(8, 12)}
# same layout, but the t^n average replaces the centre value
SOURCE_1D_LINEAR = {"n": Fraction(-5, 12), "half": Fraction(4, 12),
                    "full": Fraction(1, 12), "average": Fraction(1)}
# (edge weight, node weight) per time level, and the centre weight
SOURCE_2D = {"n": (Fraction(-12, 72), Fraction(7, 72)),
             "half": (Fraction(16, 72), Fraction(-4, 72)),
             "full": (Fraction(4, 72), Fraction(-1, 72)),
             "center": Fraction(32, 72)}
SOURCE_2D_LINEAR = {"n": (Fraction(-20, 72), Fraction(5, 72)),
                    "half": (Fraction(16, 72), Fraction(-4, 72)),
                    "full": (Fraction(4, 72), Fraction(-1, 72)),
                    "average": Fraction(1)}

assert sum(SIMPSON) == 1
assert 2 * sum(SOURCE_1D[k] for k in ("n", "half", "full")) + SOURCE_1D["center"] == 1
assert (2 * sum(SOURCE_1D_LINEAR[k] for k in ("n", "half", "full"))
        + SOURCE_1D_LINEAR["average"] == 1)
assert 4 * sum(e + v for e, v in (SOURCE_2D[k] for k in ("n", "half", "full"))) \
    + SOURCE_2D["center"] == 1
assert 4 * sum(e + v for e, v in (SOURCE_2D_LINEAR[k] for k in ("n", "half", "full"))) \
    + SOURCE_2D_LINEAR["average"] == 1


def _f(w: Fraction) -> float:
    return w.numerator / w.denominator


def cfl_dt(grid: Grid1D | Grid2D, lambda_max: float, cfl: float) -> float:
    """Largest time step allowed by the CFL number ``cfl``.

    The characteristic length is ``dx`` in 1D and ``min(dx, dy)/2`` in 2D.
    """
    if not 0.0 < cfl <= 1.0:
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
    if not lambda_max > 0.0:
        raise ValueError("lambda_max must be positive; supply a time step explicitly")
    if isinstance(grid, Grid2D):
        length = 0.5 * min(grid.dx, grid.dy)
    else:
        length = grid.dx
    return cfl * length / lambda_max


def flux_quadrature_time(q_n, q_half, q_full, flux):
    return (flux(q_n) + 4.0 * flux(q_half) + flux(q_full)) / 6.0


def edge_flux_quadrature_2d(values, normal_speed: float):
    """Tensor Simpson over (node-, mid, node+) x (t^n, t^{n+1/2}, t^{n+1}).

    ``values[a][b]`` is at space position ``a`` and time level ``b``.
    """
    v = [[np.asarray(values[a][b], dtype=float) for b in range(3)] for a in range(3)]
    w = (1.0, 4.0, 1.0)
    total = sum(w[a] * w[b] * v[a][b] for a in range(3) for b in range(3))
    return normal_speed * total / 36.0


def source_quadrature_1d(s_vals):
    """Source average from seven source values.

    Order: s(qL^n), s(qR^n), s(qL^{n+1/2}), s(qR^{n+1/2}), s(qL^{n+1}),
    s(qR^{n+1}), s(q_mid) with ``q_mid`` the t^n reconstruction at the centre.
    """
    sLn, sRn, sLh, sRh, sLf, sRf, smid = (np.asarray(s, dtype=float) for s in s_vals)
    return (sLf + sRf + 4.0 * (sLh + sRh) - 3.0 * (sLn + sRn) + 8.0 * smid) / 12.0


def source_quadrature_1d_linear(q_avg, q_vals):
    """Space-time average of ``q`` from the t^n average and six interface values
    (same order as :func:`source_quadrature_1d`, without the centre)."""
    qLn, qRn, qLh, qRh, qLf, qRf = (np.asarray(q, dtype=float) for q in q_vals)
    return q_avg + (-5.0 * (qLn + qRn) + qLf + qRf + 4.0 * (qLh + qRh)) / 12.0


def _edge_node_split(vals):
    vals = [np.asarray(v, dtype=float) for v in vals]
    levels = []
    for k in range(3):
        block = vals[8 * k:8 * k + 8]
        levels.append((sum(block[:4]), sum(block[4:])))
    return levels


def source_quadrature_2d(s_vals):
    """Source average from 25 values.

    Order: for each time level t^n, t^{n+1/2}, t^{n+1} the four edges
    (W, E, S, N) then the four nodes (SW, SE, NW, NE); last the source at the
    t^n reconstruction's centre value.
    """
    if len(s_vals) != 25:
        raise ValueError("source_quadrature_2d needs 25 values")
    levels = _edge_node_split(s_vals[:24])
    out = _f(SOURCE_2D["center"]) * np.asarray(s_vals[24], dtype=float)
    for key, (edges, nodes) in zip(("n", "half", "full"), levels):
        we, wn = SOURCE_2D[key]
        out = out + _f(we) * edges + _f(wn) * nodes
    return out


def source_quadrature_2d_linear(q_avg, q_vals):
    """Space-time average of ``q`` from the average and 24 boundary values."""
    levels = _edge_node_split(q_vals)
    out = np.asarray(q_avg, dtype=float)
    for key, (edges, nodes) in zip(("n", "half", "full"), levels):
        we, wn = SOURCE_2D_LINEAR[key]
        out = out + _f(we) * edges + _f(wn) * nodes
    return out


def step_1d(grid: Grid1D, field: Field1D, rule: BoundaryRule, system: LinearSystem1D,
            opts: Rk2Options, dt: float) -> Field1D:
    """One Active Flux step; ``field`` is left untouched."""
    if dt * system.max_speed > grid.dx * (1.0 + 1e-12):
        raise CflError(f"dt = {dt:g} violates the CFL condition")
    if rule.kind == "periodic":
        # the last slot aliases the first; fluxes must see the same value
        field = field.copy()
        enforce_periodic_1d(field)
    padded = pad_1d(field, rule)
    q_n = field.points
    q_half = evolve_points_1d(grid, field, rule, system, opts, 0.5 * dt, padded)
    q_full = evolve_points_1d(grid, field, rule, system, opts, dt, padded)
    if rule.kind == "periodic":
        q_half[:, -1] = q_half[:, 0]
        q_full[:, -1] = q_full[:, 0]

    flux = flux_quadrature_time(q_n, q_half, q_full, system.flux_conserved)
    s = system.source_conserved
    s_n, s_h, s_f = s(q_n), s(q_half), s(q_full)
    q_mid = recon1d_midpoint(field.averages, q_n[:, :-1], q_n[:, 1:])
    s_hat = source_quadrature_1d((s_n[:, :-1], s_n[:, 1:], s_h[:, :-1], s_h[:, 1:],
                                  s_f[:, :-1], s_f[:, 1:], s(q_mid)))
    averages = (field.averages - dt / grid.dx * (flux[:, 1:] - flux[:, :-1])
                + dt * s_hat)
    out = Field1D(averages, q_full)
    if rule.kind == "periodic":
        enforce_periodic_1d(out)
    return out


def step_2d(grid: Grid2D, field: Field2D, rule: BoundaryRule, spec: Advection2DSpec,
            opts: Rk2Options, dt: float) -> Field2D:
    """One 2D Active Flux step for scalar advection with a source."""
    if rule.kind == "periodic":
        field = field.copy()
        enforce_periodic_2d(field)
    padded = pad_2d(field, rule)
    levels = [(field.nodes, field.edges_v, field.edges_h),
              evolve_points_2d(grid, field, rule, spec, opts, 0.5 * dt, padded),
              evolve_points_2d(grid, field, rule, spec, opts, dt, padded)]
    Ux, Uy = (float(u) for u in spec.U)

    # vertical edges: nodes (i, j), (i, j+1) and midpoint edges_v (i, j)
    F = edge_flux_quadrature_2d(
        [[lv[0][:, :-1] for lv in levels], [lv[1] for lv in levels],
         [lv[0][:, 1:] for lv in levels]], Ux)
    G = edge_flux_quadrature_2d(
        [[lv[0][:-1, :] for lv in levels], [lv[2] for lv in levels],
         [lv[0][1:, :] for lv in levels]], Uy)

    s = spec.source
    vals = []
    for nodes, ev, eh in levels:
        vals += [s(ev[:-1, :]), s(ev[1:, :]), s(eh[:, :-1]), s(eh[:, 1:]),
                 s(nodes[:-1, :-1]), s(nodes[1:, :-1]), s(nodes[:-1, 1:]), s(nodes[1:, 1:])]
    nodes, ev, eh = levels[0]
    center = recon2d_center((field.averages, ev[:-1, :], ev[1:, :], eh[:, :-1], eh[:, 1:],
                             nodes[:-1, :-1], nodes[1:, :-1], nodes[:-1, 1:], nodes[1:, 1:]))
    vals.append(s(center))
    s_hat = source_quadrature_2d(vals)

    averages = (field.averages - dt / grid.dx * (F[1:, :] - F[:-1, :])
                - dt / grid.dy * (G[:, 1:] - G[:, :-1]) + dt * s_hat)
    out = Field2D(averages, *levels[2])
    if rule.kind == "periodic":
        enforce_periodic_2d(out)
    return out
