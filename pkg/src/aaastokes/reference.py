"""Direct numerical solution of eps^2 u'' + u = u_0(x), used as an oracle.

Integration starts far left of the Stokes curve from the optimally truncated
series, so the homogeneous oscillations are not excited there; anything
oscillatory found to the right of Re x = 0 is the switched-on exponential.

The oracle is meaningful for eps >~ 0.15: below that, e^{-1/eps} drops under
the fixed-step integration error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exact_asymptotics import exact_leading_order, optimally_truncated_series
from .rational_fit import InvalidInputError

__all__ = ["ReferenceSolution", "numeric_reference_solution", "rk4_fixed"]

DEFAULT_STEPS_PER_EPS = 40


@dataclass(frozen=True, eq=False)
class ReferenceSolution:
    epsilon: float
    start: float
    grid: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    method_metadata: dict = field(default_factory=dict)

    def __call__(self, x):
        return np.interp(x, self.grid, self.values)


def rk4_fixed(rhs: Callable, y0: np.ndarray, x0: float, h: float, n_steps: int):
    """Classical fourth-order Runge-Kutta with a fixed step; returns (x, Y)."""
    y = np.asarray(y0, dtype=float).copy()
    xs = x0 + h * np.arange(n_steps + 1)
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    for k in range(n_steps):
        x = xs[k]
        k1 = rhs(x, y)
        k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(x + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = y
    return xs, out


def numeric_reference_solution(
    epsilon: float,
    x0: float = -10.0,
    x1: float = 5.0,
    step: float | None = None,
    forcing: Callable | None = None,
    initial: tuple[float, float] | None = None,
) -> ReferenceSolution:
    """Integrate eps^2 u'' + u = forcing(x) on [x0, x1].

    ``forcing`` defaults to the real leading order u_0. Initial data default to
    the optimally truncated series and its derivative at ``x0``.
    """
    if not epsilon > 0:
        raise InvalidInputError("epsilon must be positive")
    if x0 > -10 or x1 < 5:
        raise InvalidInputError("need x0 <= -10 and x1 >= 5")
    if step is None:
        step = epsilon / DEFAULT_STEPS_PER_EPS
    if step > epsilon / 20:
        raise InvalidInputError(
            f"step {step:g} under-resolves oscillations of period {2 * math.pi * epsilon:g}; "
            "need step <= eps/20"
        )
    if forcing is None:
        def forcing(x):
            return exact_leading_order(x).real

    n_steps = int(math.ceil((x1 - x0) / step))
    h = (x1 - x0) / n_steps
    if initial is None:
        u0 = optimally_truncated_series(x0, epsilon).real
        du0 = optimally_truncated_series(x0, epsilon, derivative=True).real
    else:
        u0, du0 = initial
    inv_eps2 = 1.0 / epsilon**2

    def rhs(x, y):
        return np.array([y[1], (forcing(x) - y[0]) * inv_eps2])

    xs, Y = rk4_fixed(rhs, np.array([u0, du0]), x0, h, n_steps)
    return ReferenceSolution(
        epsilon=epsilon,
        start=x0,
        grid=xs,
        values=Y[:, 0],
        derivatives=Y[:, 1],
        method_metadata={"method": "rk4", "order": 4, "step": h, "n_steps": n_steps},
    )
