"""Equation definitions: 1D linear systems in characteristic form and 2D scalar
advection, both with (possibly nonlinear) sources.

All callables act on arrays whose leading axis is the variable index, so a
source for an ``m``-variable system maps ``(m, ...)`` to ``(m, ...)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

SOURCE_KINDS = ("none", "linear", "power", "custom")


class ParameterError(ValueError):
    pass


class BlowUpError(ArithmeticError):
    """The source ODE leaves its domain of existence before the requested time."""


@dataclass(frozen=True)
class ScalarSource:
    """Scalar source ``s(q)``: none, ``kappa*q``, ``kappa*q**power`` or custom."""

    kind: str = "none"
    kappa: float = 0.0
    power: float = 1.0
    func: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ParameterError(f"unknown source kind {self.kind!r}")
        if self.kind == "custom" and self.func is None:
            raise ParameterError("custom source needs a callable")
        if self.kind == "power" and self.power == 1.0:
            raise ParameterError("power source needs power != 1; use kind='linear'")

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        if self.kind == "none":
            return np.zeros_like(q)
        if self.kind == "linear":
            return self.kappa * q
        if self.kind == "power":
            return self.kappa * q ** self.power
        return np.asarray(self.func(q), dtype=float)

    @property
    def has_exact_flow(self) -> bool:
        return self.kind != "custom"

    def exact_flow(self, q, t: float):
        """Solution at time ``t`` of ``dq/dt = s(q)`` started from ``q``."""
        q = np.asarray(q, dtype=float)
        if self.kind == "none":
            return q.copy()
        if self.kind == "linear":
            return q * np.exp(self.kappa * t)
        if self.kind == "power":
            B = self.power
            with np.errstate(invalid="ignore"):
                radicand = 1.0 + (1.0 - B) * self.kappa * t * q ** (B - 1.0)
            if np.any(~np.isfinite(radicand)):
                raise BlowUpError("power source undefined for these values")
            if np.any(radicand <= 0.0):
                raise BlowUpError(f"power-law source blows up before t={t}")
            return q * radicand ** (1.0 / (1.0 - B))
        raise ParameterError("no closed-form flow for a custom source")


@dataclass(frozen=True)
class LinearSystem1D:
    """``q_t + A q_x = s(q)`` with ``A = R diag(speeds) L``.

    ``to_char`` is ``L`` and ``from_char`` is ``R``.  ``source_char`` maps
    characteristic states to characteristic sources, ``source_conserved``
    conserved to conserved.  ``gravity`` is set for acoustics with gravity
    (it enables the well-balancing correction), ``scalar_source`` for scalar
    advection (it enables exact point evolution).
    """

    speeds: np.ndarray
    to_char: np.ndarray
    from_char: np.ndarray
    flux_matrix: np.ndarray
    source_char: Callable
    source_conserved: Callable
    names: Sequence[str] = ("q",)
    gravity: Optional[float] = None
    scalar_source: Optional[ScalarSource] = None
    velocity_index: int = field(default=1)
    density_index: int = field(default=0)

    @property
    def m(self) -> int:
        return len(self.speeds)

    @property
    def max_speed(self) -> float:
        return float(np.max(np.abs(self.speeds)))

    def flux_conserved(self, q):
        return np.tensordot(self.flux_matrix, np.asarray(q, dtype=float), axes=1)

    def char_of(self, q):
        return np.tensordot(self.to_char, np.asarray(q, dtype=float), axes=1)

    def conserved_of(self, Q):
        return np.tensordot(self.from_char, np.asarray(Q, dtype=float), axes=1)


@dataclass(frozen=True)
class Advection2DSpec:
    U: tuple[float, float]
    source: ScalarSource = ScalarSource()

    def __post_init__(self):
        if not np.all(np.isfinite(self.U)):
            raise ParameterError("advection velocity must be finite")

    @property
    def source_kind(self) -> str:
        return self.source.kind


@dataclass(frozen=True)
class AcousticsParams:
    c: float = 1.0
    g: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise ParameterError(f"sound speed must be positive, got {self.c}")


def make_advection_1d(u: float, source: ScalarSource | None = None) -> LinearSystem1D:
    source = source or ScalarSource()
    one = np.ones((1, 1))
    return LinearSystem1D(
        speeds=np.array([float(u)]), to_char=one, from_char=one,
        flux_matrix=float(u) * one, source_char=source, source_conserved=source,
        names=("q",), scalar_source=source)


def make_acoustics_gravity(params: AcousticsParams) -> LinearSystem1D:
    """Acoustics with gravity in the ordering (rho, v, p).

    Characteristic variables are ``Q1 = (p + c v)/2``, ``Q2 = (p - c v)/2``,
    ``Q3 = rho - p/c**2`` with speeds ``(c, -c, 0)``.
    """
    c, g = float(params.c), float(params.g)
    L = np.array([[0.0, 0.5 * c, 0.5],
                  [0.0, -0.5 * c, 0.5],
                  [1.0, 0.0, -1.0 / c ** 2]])
    R = np.array([[1.0 / c ** 2, 1.0 / c ** 2, 1.0],
                  [1.0 / c, -1.0 / c, 0.0],
                  [1.0, 1.0, 0.0]])
    A = np.array([[0.0, 1.0, 0.0],
                  [0.0, 0.0, 1.0],
                  [0.0, c ** 2, 0.0]])

    def source_char(Q):
        Q = np.asarray(Q, dtype=float)
        s1 = g / (2.0 * c) * (Q[0] + Q[1]) + 0.5 * c * g * Q[2]
        return np.stack([s1, -s1, np.zeros_like(s1)])

    def source_conserved(q):
        q = np.asarray(q, dtype=float)
        zero = np.zeros_like(q[0])
        return np.stack([zero, g * q[0], zero])

    return LinearSystem1D(
        speeds=np.array([c, -c, 0.0]), to_char=L, from_char=R, flux_matrix=A,
        source_char=source_char, source_conserved=source_conserved,
        names=("rho", "v", "p"), gravity=g)
