"""Exact reference solutions.

Bessel functions J0 and J1, and the solution of linear acoustics with gravity
for data that are nonzero only in the velocity.  With ``mu = g/(2 c^2)`` and
``s = sqrt((ct)^2 - (x - x')^2)`` the velocity is

    v = 1/2 int e^{mu (x-x')} d/d(ct) J0(mu s) v0(x') dx'
        + 1/2 (e^{-mu ct} v0(x+ct) + e^{mu ct} v0(x-ct))

and the density uses the kernel ``(mu + d/dx) J0(mu s)``; pressure follows
from ``p - c^2 rho`` being constant in time.  Both kernels are entire
functions of ``x'`` on ``[x-ct, x+ct]`` once ``J1(z)/z`` is evaluated by its
series, so Gauss-Legendre panels converge spectrally as long as they do not
straddle a discontinuity of ``v0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

_SERIES_LIMIT = 12.0
_N_SERIES = 60
_N_ASYMPTOTIC = 24


class OracleAccuracyError(RuntimeError):
    """The reference quadrature did not reach its tolerance."""


def _series(x, order):
    # sum_k (-1)^k (x/2)^(2k + order) / (k! (k + order)!)
    z = -(0.5 * x) ** 2
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, _N_SERIES):
        term = term * z / (k * (k + order))
        total = total + term
    if order == 1:
        return 0.5 * x * total
    return total


def _j1_over_x_series(x):
    z = -(0.5 * x) ** 2
    term = np.full_like(x, 0.5)
    total = term.copy()
    for k in range(1, _N_SERIES):
        term = term * z / (k * (k + 1))
        total = total + term
    return total


def _asymptotic(x, order):
    # Hankel expansion, truncated where the terms are still decreasing for x >= 12
    mu = 4.0 * order * order
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    a = 1.0
    for k in range(1, _N_ASYMPTOTIC):
        a = a * (mu - (2 * k - 1) ** 2) / (k * 8.0)
        term = a / x ** k
        if k % 2 == 1:
            Q = Q + (term if (k // 2) % 2 == 0 else -term)
        else:
            P = P + (term if (k // 2) % 2 == 0 else -term)
    omega = x - (0.5 * order + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (P * np.cos(omega) - Q * np.sin(omega))


def bessel_j(order: int, x):
    """Bessel function of the first kind, order 0 or 1.

    Power series below |x| = 12, Hankel asymptotic expansion above.
    """
    if order not in (0, 1):
        raise ValueError(f"unsupported Bessel order {order}")
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    small = ax < _SERIES_LIMIT
    out = np.empty_like(ax)
    if np.any(small):
        out[small] = _series(ax[small], order)
    if np.any(~small):
        out[~small] = _asymptotic(ax[~small], order)
    if order == 1:
        out = np.where(x < 0, -out, out)
    return float(out) if out.ndim == 0 else out


def j1_over_x(x):
    """``J1(x)/x`` with the regular value 1/2 at the origin."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    small = ax < _SERIES_LIMIT
    out = np.empty_like(ax)
    if np.any(small):
        out[small] = _j1_over_x_series(ax[small])
    if np.any(~small):
        out[~small] = _asymptotic(ax[~small], 1) / ax[~small]
    return float(out) if out.ndim == 0 else out


@dataclass
class VelocityData:
    """Initial velocity ``v0`` with its discontinuity locations."""

    v0: Callable
    breakpoints: Sequence[float] = field(default_factory=tuple)

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.size > 1 and np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        self.breakpoints = tuple(bp.tolist())

    def at(self, x: float) -> float:
        """Point value; at a breakpoint the left limit is used."""
        if x in self.breakpoints:
            x = np.nextafter(x, -np.inf)
        return float(self.v0(np.asarray(x)))

    @classmethod
    def piecewise(cls, edges: Sequence[float], values: Sequence[float]) -> "VelocityData":
        """Piecewise constant data: ``values[k]`` on ``(edges[k-1], edges[k]]``."""
        edges = np.asarray(edges, dtype=float)
        values = np.asarray(values, dtype=float)
        if len(values) != len(edges) + 1:
            raise ValueError("need one more value than edges")

        def v0(x):
            return values[np.searchsorted(edges, np.asarray(x, dtype=float), side="left")]

        return cls(v0, tuple(edges))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _panel_integral(f, a, b, n_panels):
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    xs = (mids[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    vals = f(xs)
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return vals @ w


def _integrate(f, a, b, breakpoints, tol, max_panels):
    cuts = [a] + [p for p in breakpoints if a < p < b] + [b]
    total = np.zeros(2)
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        n = 1
        prev = _panel_integral(f, lo, hi, n)
        while True:
            n *= 2
            cur = _panel_integral(f, lo, hi, n)
            if np.max(np.abs(cur - prev)) <= tol:
                break
            if n >= max_panels:
                raise OracleAccuracyError(
                    f"quadrature on [{lo}, {hi}] not converged with {n} panels")
            prev = cur
        total += cur
    return total


def acoustics_green_solution(data: VelocityData, c: float, g: float, t: float, x: float,
                             tol: float = 1e-9, max_panels: int = 4096):
    """``(rho, v, p)`` at ``(t, x)`` for initial data ``(0, v0, 0)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    x = float(x)
    if t == 0:
        return 0.0, data.at(x), 0.0
    mu = g / (2.0 * c * c)
    ct = c * t
    v_plus, v_minus = data.at(x + ct), data.at(x - ct)
    em, ep = math.exp(-mu * ct), math.exp(mu * ct)
    if mu == 0.0:
        v = 0.5 * (v_plus + v_minus)
        rho = -(v_plus - v_minus) / (2.0 * c)
        return rho, v, c * c * rho

    def integrand(xp):
        d = x - xp
        s = np.sqrt(np.maximum(ct * ct - d * d, 0.0))
        j1s = j1_over_x(mu * s)
        w = np.exp(mu * d) * data.v0(xp)
        kv = -mu * mu * ct * j1s
        kr = mu * bessel_j(0, mu * s) + mu * mu * d * j1s
        return np.stack([w * kv, w * kr], axis=0)

    iv, ir = _integrate(integrand, x - ct, x + ct, data.breakpoints, tol, max_panels)
    v = 0.5 * iv + 0.5 * (em * v_plus + ep * v_minus)
    rho = -ir / (2.0 * c) - (em * v_plus - ep * v_minus) / (2.0 * c)
    return rho, v, c * c * rho


def riemann_exact(rho_c: float, p_c: float, data: VelocityData, c: float, g: float,
                  t: float, x: float, tol: float = 1e-9):
    """Constant ``(rho_c, p_c)`` plus velocity data: superpose the velocity-only
    solution and the uniform-state evolution ``(rho_c, rho_c g t, p_c)``."""
    rho, v, p = acoustics_green_solution(data, c, g, t, x, tol=tol)
    return rho + rho_c, v + rho_c * g * t, p + p_c


def solution_breakpoints(data: VelocityData, c: float, t: float) -> list[float]:
    """Locations where the velocity-only solution may be discontinuous."""
    return sorted({b + s * c * t for b in data.breakpoints for s in (-1.0, 1.0)})
