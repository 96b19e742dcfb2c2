"""Exponential asymptotics of eps^2 u'' + u = 1/sqrt(x+i) + 1/sqrt(x-i).

The leading order has branch points at +-i with cuts running vertically away
from the real axis. Series terms are evaluated in log-Gamma arithmetic so that
large orders never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, gammaln

from .rational_fit import InvalidInputError

__all__ = [
    "BranchCutError",
    "ExactProblem",
    "StokesCurve",
    "SeriesTerm",
    "sqrt_x_minus_i",
    "sqrt_x_plus_i",
    "exact_leading_order",
    "series_coefficient_log",
    "scaled_series_term",
    "series_term",
    "series_term_derivative",
    "series_terms",
    "optimal_truncation",
    "truncated_series",
    "optimally_truncated_series",
    "exact_exp_amplitude",
    "exact_exp_contribution",
    "stokes_multiplier_profile",
    "stokes_jump",
    "exact_stokes_curves",
]

_ROT = np.exp(-0.25j * np.pi)
_LOG_MAX = 709.0  # log of the largest finite double, rounded down


class BranchCutError(ValueError):
    """Evaluation point lies on a branch cut {iy : |y| >= 1}."""


@dataclass(frozen=True)
class ExactProblem:
    epsilon: float
    branch_points: tuple[complex, complex] = (1j, -1j)

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise InvalidInputError("epsilon must be finite and positive")


@dataclass(frozen=True)
class StokesCurve:
    """Vertical Stokes curve from ``anchor`` to the real axis."""

    anchor: complex
    real_axis_crossing: float
    direction: str  # "upward" or "downward"


@dataclass(frozen=True)
class SeriesTerm:
    n: int
    value: complex
    magnitude_log10: float


def _check_cuts(x: np.ndarray) -> None:
    on_cut = (x.real == 0) & (np.abs(x.imag) >= 1)
    if np.any(on_cut):
        raise BranchCutError(f"point(s) on a branch cut: {x[on_cut][:3]}")


def _log_x_minus_i(x):
    # log(x - i) with the cut running up from i
    return np.log(1j * (x - 1j)) - 0.5j * np.pi


def _log_x_plus_i(x):
    # log(x + i) with the cut running down from -i
    return np.log(-1j * (x + 1j)) + 0.5j * np.pi


def sqrt_x_minus_i(x):
    """sqrt(x - i), cut along {iy : y >= 1}."""
    return np.sqrt(1j * (np.asarray(x, dtype=complex) - 1j)) * _ROT


def sqrt_x_plus_i(x):
    """sqrt(x + i), cut along {iy : y <= -1}."""
    return np.sqrt(-1j * (np.asarray(x, dtype=complex) + 1j)) * np.conj(_ROT)


def _out(v, x):
    return complex(v) if np.ndim(x) == 0 else v


def exact_leading_order(x):
    """u_0(x) = 1/sqrt(x+i) + 1/sqrt(x-i)."""
    xv = np.asarray(x, dtype=complex)
    _check_cuts(np.atleast_1d(xv))
    return _out(1.0 / sqrt_x_plus_i(xv) + 1.0 / sqrt_x_minus_i(xv), x)


def series_coefficient_log(n: int) -> float:
    """log of (4n)! / (2^{4n} (2n)!)."""
    return float(gammaln(4 * n + 1) - 4 * n * math.log(2.0) - gammaln(2 * n + 1))


def scaled_series_term(n: int, x, epsilon: float = 1.0, component: str = "both"):
    """eps^{2n} u_n(x), with the eps power folded into the log-space exponent.

    ``component="upper"`` keeps only the (x - i) term, the one whose magnitude
    sets the optimal truncation point.
    """
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    xv = np.asarray(x, dtype=complex)
    _check_cuts(np.atleast_1d(xv))
    s = 2 * n + 0.5
    c = series_coefficient_log(n) + 2 * n * math.log(epsilon)
    logs = [c - s * _log_x_minus_i(xv)]
    if component == "both":
        logs.append(c - s * _log_x_plus_i(xv))
    elif component != "upper":
        raise InvalidInputError(f"unknown component {component!r}")
    if max(float(np.max(lg.real)) for lg in logs) > _LOG_MAX:
        raise OverflowError(
            f"eps^{2 * n} u_{n} exceeds double range; pass a smaller epsilon"
        )
    v = sum(np.exp(lg) for lg in logs)
    return _out((-1) ** n * v, x)


def series_term(n: int, x):
    """u_n(x) = (-1)^n (4n)! / (2^{4n} (2n)!) [(x-i)^{-(2n+1/2)} + (x+i)^{-(2n+1/2)}]."""
    return scaled_series_term(n, x, 1.0)


def series_term_derivative(n: int, x, epsilon: float = 1.0):
    """eps^{2n} d/dx u_n(x)."""
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    xv = np.asarray(x, dtype=complex)
    _check_cuts(np.atleast_1d(xv))
    s = 2 * n + 0.5
    c = series_coefficient_log(n) + math.log(s) + 2 * n * math.log(epsilon)
    v = np.exp(c - (s + 1) * _log_x_minus_i(xv)) + np.exp(c - (s + 1) * _log_x_plus_i(xv))
    return _out(-((-1) ** n) * v, x)


def series_terms(x: complex, epsilon: float, n_max: int) -> list[SeriesTerm]:
    """Terms eps^{2n} u_n(x) for n = 0..n_max, with their log10 magnitudes."""
    out = []
    for n in range(n_max + 1):
        v = scaled_series_term(n, x, epsilon)
        mag = math.log10(abs(v)) if v != 0 else -math.inf
        out.append(SeriesTerm(n, v, mag))
    return out


def optimal_truncation(x: complex, epsilon: float) -> int:
    """N_opt = ceil(|x - i| / (2 eps))."""
    if not epsilon > 0:
        raise InvalidInputError("epsilon must be positive")
    if x == 1j:
        raise InvalidInputError("x coincides with the branch point i")
    q = abs(complex(x) - 1j) / (2.0 * epsilon)
    # absorb rounding noise so that q = 5.000000000000001 still gives 5
    return max(int(math.ceil(q * (1.0 - 1e-12))), 1)


def truncated_series(x, epsilon: float, N: int):
    """sum_{n=0}^{N-1} eps^{2n} u_n(x)."""
    if N < 1:
        raise InvalidInputError("N must be >= 1")
    total = 0.0
    for n in range(N):
        total = total + scaled_series_term(n, x, epsilon)
    return total


def optimally_truncated_series(x, epsilon: float, derivative: bool = False):
    """Truncated series (or its x-derivative) with N = N_opt(x), pointwise in x."""
    xs = np.atleast_1d(np.asarray(x, dtype=complex))
    out = np.empty(xs.shape, dtype=complex)
    term = series_term_derivative if derivative else scaled_series_term
    for k, xk in enumerate(xs):
        N = optimal_truncation(xk, epsilon)
        out[k] = sum(term(n, xk, epsilon) for n in range(N))
    return complex(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def exact_exp_amplitude(epsilon: float) -> float:
    """4 sqrt(pi/eps) e^{-1/eps}."""
    return 4.0 * math.sqrt(math.pi / epsilon) * math.exp(-1.0 / epsilon)


def exact_exp_contribution(x, epsilon: float):
    """Switched-on exponential: amplitude * cos(x/eps + pi/4) for x > 0, else 0."""
    if not epsilon > 0:
        raise InvalidInputError("epsilon must be positive")
    xv = np.asarray(x, dtype=float)
    v = np.where(
        xv > 0, exact_exp_amplitude(epsilon) * np.cos(xv / epsilon + 0.25 * np.pi), 0.0
    )
    return float(v) if np.ndim(x) == 0 else v


def stokes_multiplier_profile(theta_scaled, r: float, epsilon: float):
    """Fraction of the Stokes jump switched on at inner angle ``theta_scaled``.

    ``(1 + erf(theta_scaled * sqrt(r/2))) / 2``; exactly one half on the curve.
    ``epsilon`` only enters through the scaling theta = sqrt(eps) * theta_scaled.
    """
    if not (r > 0 and epsilon > 0):
        raise InvalidInputError("r and epsilon must be positive")
    v = 0.5 * (1.0 + erf(np.asarray(theta_scaled, dtype=float) * math.sqrt(r / 2.0)))
    return float(v) if np.ndim(theta_scaled) == 0 else v


def stokes_jump(r: float, epsilon: float) -> complex:
    """[S] = -i sqrt(2 i r / eps) * integral of exp(-r v^2 / 2) dv."""
    if not (r > 0 and epsilon > 0):
        raise InvalidInputError("r and epsilon must be positive")
    return -1j * np.sqrt(2j * r / epsilon) * math.sqrt(2.0 * math.pi / r)


def exact_stokes_curves() -> list[StokesCurve]:
    return [
        StokesCurve(anchor=1j, real_axis_crossing=0.0, direction="downward"),
        StokesCurve(anchor=-1j, real_axis_crossing=0.0, direction="upward"),
    ]
