"""Hydrostatic initial data for acoustics with gravity and discrete-equilibrium
diagnostics.

Discrete data are kept exactly stationary by the well-balanced scheme when,
for every cell,

    rho_avg_i = (rho_{i-1/2} + rho_{i+1/2}) / 2
    (p_{i+1/2} - p_{i-1/2}) / dx = g (rho_{i-1/2} + rho_{i+1/2}) / 2
    (p_avg_{i+1} - p_avg_i) / dx = g (rho_{i+3/2} + 4 rho_{i+1/2} + rho_{i-1/2}) / 6
"""
from __future__ import annotations

import numpy as np

from .equations import ParameterError
from .grid import Field1D, Grid1D

_GL5_NODES, _GL5_WEIGHTS = np.polynomial.legendre.leggauss(5)


class DomainError(ValueError):
    pass


def cell_averages(grid: Grid1D, f) -> np.ndarray:
    """5-point Gauss-Legendre average of ``f`` over every cell.

    ``f`` may return ``(n,)`` or ``(m, n)`` shaped arrays.
    """
    xs = grid.centers[:, None] + 0.5 * grid.dx * _GL5_NODES[None, :]
    vals = np.asarray(f(xs), dtype=float)
    return 0.5 * (vals * _GL5_WEIGHTS).sum(axis=-1)


def field_from_function(grid: Grid1D, f) -> Field1D:
    """Sample ``f`` (returning ``(m, ...)``) at interfaces and average over cells."""
    pts = np.atleast_2d(np.asarray(f(grid.interfaces), dtype=float))
    avg = np.atleast_2d(cell_averages(grid, f))
    return Field1D(avg, pts)


def init_parabola(grid: Grid1D, A1: float, A2: float, A3: float, g: float) -> Field1D:
    """``p = A1 x^2 + A2 x + A3``, ``rho = (2 A1 x + A2)/g``, ``v = 0``."""
    if g == 0:
        raise ParameterError("hydrostatic parabola needs g != 0")
    x = grid.interfaces
    xc = grid.centers
    zeros = np.zeros_like(x)
    points = np.stack([(2 * A1 * x + A2) / g, zeros, A1 * x ** 2 + A2 * x + A3])
    averages = np.stack([(2 * A1 * xc + A2) / g, np.zeros_like(xc),
                         A1 * (xc ** 2 + grid.dx ** 2 / 12) + A2 * xc + A3])
    return Field1D(averages, points)


def isentropic_profile(K: float, gamma: float, rho0: float, g: float):
    """``(rho, v, p)`` of the polytropic atmosphere ``p = K rho^gamma``."""

    def f(x):
        x = np.asarray(x, dtype=float)
        base = g * (gamma - 1.0) / (K * gamma) * x + rho0 ** (gamma - 1.0)
        if np.any(base <= 0):
            raise DomainError("atmosphere cutoff inside the grid")
        rho = base ** (1.0 / (gamma - 1.0))
        return np.stack([rho, np.zeros_like(rho), K * rho ** gamma])

    return f


def init_isentropic(grid: Grid1D, K: float, gamma: float, rho0: float, g: float) -> Field1D:
    return field_from_function(grid, isentropic_profile(K, gamma, rho0, g))


def add_pressure_perturbation(grid: Grid1D, field: Field1D, amplitude: float,
                              width_coeff: float) -> Field1D:
    """Add ``amplitude * exp(-width_coeff x^2)`` to the pressure (last variable)."""
    out = field.copy()
    if amplitude == 0:
        return out

    def bump(x):
        return amplitude * np.exp(-width_coeff * np.asarray(x) ** 2)

    out.points[2] += bump(grid.interfaces)
    out.averages[2] += cell_averages(grid, bump)
    return out


def hydrostatic_residual(grid: Grid1D, field: Field1D, g: float) -> tuple[float, float, float]:
    """Max-norm residuals of the three discrete hydrostatic conditions."""
    rho_avg, p_avg = field.averages[0], field.averages[2]
    rho, p = field.points[0], field.points[2]
    dx = grid.dx
    r0 = rho_avg - 0.5 * (rho[1:] + rho[:-1])
    r1 = (p[1:] - p[:-1]) / dx - 0.5 * g * (rho[:-1] + rho[1:])
    r2 = (p_avg[1:] - p_avg[:-1]) / dx - g * (rho[2:] + 4 * rho[1:-1] + rho[:-2]) / 6
    return float(np.max(np.abs(r0))), float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))
