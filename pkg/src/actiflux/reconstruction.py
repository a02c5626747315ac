"""Cell-local reconstructions and their global (piecewise) evaluation.

Both reconstructions interpolate the point values on the cell boundary and
reproduce the cell average; the global reconstruction is continuous but in
general not differentiable across interfaces.
"""
from __future__ import annotations

import numpy as np

from ._kernels_py import _parabola, recon2d_weights
from .grid import (GHOST_DEPTH, BoundaryRule, Field1D, Field2D, Grid1D, Grid2D,
                   GridError, locate_cell, pad_1d, pad_2d)


def recon1d_eval(q_avg, q_left, q_right, xi):
    """Parabola through ``q_left`` (xi=-1/2), ``q_right`` (xi=+1/2) with mean ``q_avg``."""
    return _parabola(np.asarray(q_avg, dtype=float), q_left, q_right, xi)


def recon1d_midpoint(q_avg, q_left, q_right):
    return (6.0 * np.asarray(q_avg, dtype=float) - q_left - q_right) * 0.25


def recon2d_eval(dofs, xi, eta):
    """Biparabolic reconstruction on the unit cell.

    ``dofs`` is ordered (avg, W, E, S, N, SW, SE, NW, NE); entries may be
    arrays that broadcast against ``xi`` and ``eta``.
    """
    if len(dofs) != 9:
        raise ValueError("recon2d_eval needs exactly 9 degrees of freedom")
    w = recon2d_weights(np.asarray(xi, dtype=float), np.asarray(eta, dtype=float))
    return sum(wk * np.asarray(d, dtype=float) for wk, d in zip(w, dofs))


def recon2d_center(dofs):
    """Value at the cell centre: 9/4 avg - edges/4 - nodes/16."""
    avg, W, E, S, N, SW, SE, NW, NE = (np.asarray(d, dtype=float) for d in dofs)
    return 2.25 * avg - 0.25 * (W + E + S + N) - 0.0625 * (SW + SE + NW + NE)


def global_eval_1d(grid: Grid1D, field: Field1D, rule: BoundaryRule, var: int, x):
    """Evaluate the global reconstruction of variable ``var`` at ``x``.

    ``x`` may lie one ghost cell outside the domain.
    """
    cell = np.asarray(locate_cell(grid, x))
    avg_pad, pts_pad = pad_1d(field, rule)
    c = cell + GHOST_DEPTH
    xi = (np.asarray(x, dtype=float) - (grid.x_min + (cell + 0.5) * grid.dx)) / grid.dx
    out = recon1d_eval(avg_pad[var, c], pts_pad[var, c], pts_pad[var, c + 1], xi)
    return float(out) if out.ndim == 0 else out


def _locate_axis(lo, h, n, x):
    x = np.asarray(x, dtype=float)
    if np.any(x < lo - h * (1 + 1e-12)) or np.any(x > lo + (n + 1) * h * (1 + 1e-12)):
        raise GridError("point outside the domain plus one ghost layer")
    idx = np.clip(np.ceil((x - lo) / h).astype(int) - 1, -1, n)
    return idx, (x - (lo + (idx + 0.5) * h)) / h


def global_eval_2d(grid: Grid2D, field: Field2D, rule: BoundaryRule, x, y):
    """Evaluate the global biparabolic reconstruction at ``(x, y)``."""
    ci, xi = _locate_axis(grid.x_min, grid.dx, grid.n_x, x)
    cj, eta = _locate_axis(grid.y_min, grid.dy, grid.n_y, y)
    A, Nd, Ev, Eh = pad_2d(field, rule)
    i = ci + GHOST_DEPTH
    j = cj + GHOST_DEPTH
    dofs = (A[i, j], Ev[i, j], Ev[i + 1, j], Eh[i, j], Eh[i, j + 1],
            Nd[i, j], Nd[i + 1, j], Nd[i, j + 1], Nd[i + 1, j + 1])
    out = np.asarray(recon2d_eval(dofs, xi, eta))
    return float(out) if out.ndim == 0 else out
