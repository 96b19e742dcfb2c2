"""Exponential asymptotics driven by a rational leading order.

Each conjugate pole pair (p, a), (conj p, conj a) of the fitted leading order
switches on

    2 Re[(2 pi a / eps) exp(-i (x - p) / eps)]

as its Stokes curve Re x = Re p is crossed from left to right.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln

from .exact_asymptotics import StokesCurve, exact_exp_contribution
from .rational_fit import InvalidInputError, PoleSet, SampleGrid, fit_pole_set

logger = logging.getLogger(__name__)

__all__ = [
    "PoleEvaluationError",
    "ExpContribution",
    "SweepRecord",
    "AMPLITUDE_WINDOW",
    "approx_series_term",
    "approx_stokes_curves",
    "exp_contributions",
    "approx_exp_contribution",
    "pair_contributions",
    "pair_amplitudes",
    "measure_amplitude",
    "amplitude_ratio",
    "default_eps_grid",
    "eps_sweep",
]

AMPLITUDE_WINDOW = (1.0, 3.0)
AMPLITUDE_SAMPLES = 200


class PoleEvaluationError(ValueError):
    """Evaluation point coincides with a pole."""


@dataclass(frozen=True)
class ExpContribution:
    """Exponentially small term switched on by one pole pair."""

    pair_index: int
    prefactor: complex
    exponent_anchor: complex
    activation_threshold: float
    epsilon: float

    def __call__(self, x):
        xv = np.asarray(x, dtype=float)
        wave = self.prefactor * np.exp(-1j * (xv - self.exponent_anchor) / self.epsilon)
        v = np.where(xv > self.activation_threshold, 2.0 * wave.real, 0.0)
        return float(v) if np.ndim(x) == 0 else v


@dataclass(frozen=True)
class SweepRecord:
    tolerance: float
    n_pairs: int
    epsilon: float
    amplitude_ratio: float
    p1_distance: float
    relative_error: float


def approx_series_term(pole_set: PoleSet, n: int, x):
    """hat u_n(x) = (-1)^n sum_r a_r (2n)! / (x - p_r)^{2n+1} over both members of each pair.

    The sign follows from hat u_n = -hat u_{n-1}''.
    """
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    poles, residues = pole_set.all_poles()
    xv = np.atleast_1d(np.asarray(x, dtype=complex))
    if poles.size == 0:
        out = np.zeros(xv.shape, dtype=complex)
    else:
        diff = xv[:, None] - poles[None, :]
        if np.any(diff == 0):
            raise PoleEvaluationError(f"x coincides with a pole: {x}")
        logs = gammaln(2 * n + 1) - (2 * n + 1) * np.log(diff)
        out = (-1) ** n * np.sum(residues[None, :] * np.exp(logs), axis=1)
    return complex(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def approx_stokes_curves(pole_set: PoleSet) -> list[StokesCurve]:
    curves = []
    for pair in pole_set.pairs:
        p = pair.pole
        curves.append(StokesCurve(p, p.real, "downward"))
        curves.append(StokesCurve(p.conjugate(), p.real, "upward"))
    return curves


def exp_contributions(pole_set: PoleSet, epsilon: float) -> list[ExpContribution]:
    if not epsilon > 0:
        raise InvalidInputError("epsilon must be positive")
    return [
        ExpContribution(
            pair_index=pair.pair_index,
            prefactor=2.0 * math.pi * pair.residue / epsilon,
            exponent_anchor=pair.pole,
            activation_threshold=pair.pole.real,
            epsilon=epsilon,
        )
        for pair in pole_set.pairs
    ]


def pair_contributions(pole_set: PoleSet, x, epsilon: float) -> np.ndarray:
    """Per-pair switched contributions, shape ``(n_pairs, len(x))``."""
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    rows = [c(xv) for c in exp_contributions(pole_set, epsilon)]
    return np.array(rows).reshape(len(rows), xv.size)


def approx_exp_contribution(pole_set: PoleSet, x, epsilon: float):
    """hat u_exp(x): sum of every pair's contribution whose curve lies left of x."""
    total = pair_contributions(pole_set, x, epsilon).sum(axis=0)
    return float(total[0]) if np.ndim(x) == 0 else total.reshape(np.shape(x))


def pair_amplitudes(pole_set: PoleSet, epsilon: float) -> np.ndarray:
    """4 pi |a_r| exp(-Im p_r / eps) / eps for each pair."""
    p, a = pole_set.poles, pole_set.residues
    return 4.0 * math.pi * np.abs(a) * np.exp(-p.imag / epsilon) / epsilon


def measure_amplitude(
    signal: Callable,
    epsilon: float,
    window: tuple[float, float] = AMPLITUDE_WINDOW,
    n_samples: int = AMPLITUDE_SAMPLES,
) -> float:
    """Least-squares amplitude of ``A cos(x/eps) + B sin(x/eps)`` fitted to ``signal``."""
    lo, hi = window
    if not epsilon > 0:
        raise InvalidInputError("epsilon must be positive")
    if not hi - lo >= 2.0 * math.pi * epsilon:
        raise InvalidInputError("window must span at least one period 2*pi*eps")
    x = np.linspace(lo, hi, n_samples)
    M = np.column_stack([np.cos(x / epsilon), np.sin(x / epsilon)])
    y = np.asarray(signal(x), dtype=float)
    coef, *_ = np.linalg.lstsq(M, y, rcond=None)
    return float(math.hypot(coef[0], coef[1]))


def amplitude_ratio(
    pole_set: PoleSet, epsilon: float, window: tuple[float, float] = AMPLITUDE_WINDOW
) -> float:
    """Amplitude of hat u_exp over amplitude of u_exp, both measured on ``window``."""
    exact = measure_amplitude(lambda x: exact_exp_contribution(x, epsilon), epsilon, window)
    if exact == 0:
        raise ZeroDivisionError(f"exact amplitude underflows at eps={epsilon}")
    approx = measure_amplitude(
        lambda x: approx_exp_contribution(pole_set, x, epsilon), epsilon, window
    )
    return approx / exact


def default_eps_grid(lo: float = 0.005, hi: float = 0.15, per_decade: int = 60) -> np.ndarray:
    """Logarithmic eps grid, descending."""
    n = int(round(per_decade * math.log10(hi / lo))) + 1
    return np.logspace(math.log10(hi), math.log10(lo), n)


def _sweep_one(grid: SampleGrid, tol: float, eps_values: Sequence[float]) -> list[SweepRecord]:
    _, pole_set = fit_pole_set(grid, tol)
    dist = pole_set.p1_distance
    out = []
    for eps in eps_values:
        ratio = amplitude_ratio(pole_set, float(eps))
        out.append(SweepRecord(tol, len(pole_set), float(eps), ratio, dist, 1.0 - ratio))
    return out


def eps_sweep(
    grid: SampleGrid,
    tolerances: Sequence[float],
    eps_values: Sequence[float],
    max_workers: int | None = None,
) -> list[SweepRecord]:
    """Amplitude ratio for every (tolerance, eps) cell.

    One fit per tolerance. A failing tolerance is logged and skipped. Records
    come back sorted by (tolerance, eps) whatever the scheduling.
    """
    if any(not e > 0 for e in eps_values):
        raise InvalidInputError("eps values must be positive")

    def run(tol):
        try:
            return _sweep_one(grid, tol, eps_values)
        except Exception as exc:  # noqa: BLE001 - one bad tolerance must not sink the sweep
            logger.warning("sweep failed for tolerance %g: %s", tol, exc)
            return []

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            chunks = list(pool.map(run, tolerances))
    else:
        chunks = [run(t) for t in tolerances]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.tolerance, r.epsilon))
    return records
