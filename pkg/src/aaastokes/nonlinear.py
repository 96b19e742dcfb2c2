"""Square-then-fit-then-sqrt leading order for eps^2 u'' + u^2 = u_0(x)^2.

With u_0 = (9/32)(1/sqrt(x-i) + 1/sqrt(x+i)), the squared leading order has
simple poles at +-i, which AAA represents faithfully; the root of the fit
then carries the correct square-root singularity.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .exact_asymptotics import exact_leading_order, sqrt_x_minus_i, sqrt_x_plus_i
from .rational_fit import (
    BarycentricApproximant,
    InvalidInputError,
    PoleSet,
    SampleGrid,
    aaa_fit,
    evaluate,
    filter_and_pair,
    poles_and_residues,
)

__all__ = [
    "NONLINEAR_SCALE",
    "SqrtApproximant",
    "ResiduePattern",
    "QuadratureError",
    "nonlinear_leading_order",
    "nonlinear_forcing",
    "fit_squared",
    "fit_direct",
    "residue_pattern",
    "singulant",
    "exponential_scale",
    "nonlinear_exp_estimate",
]

NONLINEAR_SCALE = 9.0 / 32.0
TABLE3_TOLERANCE = 1e-10
NEAR_ANCHOR = 1e-6
SHORT_SEGMENT = 0.025  # half-length below which fixed quadrature is used


class QuadratureError(RuntimeError):
    """Singulant quadrature failed to converge."""


def nonlinear_leading_order(x):
    """(9/32)(1/sqrt(x-i) + 1/sqrt(x+i)), same cuts as the linear problem."""
    v = NONLINEAR_SCALE * np.asarray(exact_leading_order(x))
    return complex(v) if np.ndim(x) == 0 else v


def nonlinear_forcing(x):
    """(81/1024)(1/(x-i) + 1/(x+i) + 2/sqrt(x^2+1)), the squared leading order."""
    x = np.asarray(x, dtype=complex)
    root = sqrt_x_minus_i(x) * sqrt_x_plus_i(x)
    v = (81.0 / 1024.0) * (1.0 / (x - 1j) + 1.0 / (x + 1j) + 2.0 / root)
    return complex(v) if v.ndim == 0 else v


@dataclass(frozen=True, eq=False)
class SqrtApproximant:
    """Square root of a rational fit to u_0^2.

    ``branch_sign`` multiplies the principal root so the result matches the
    sign of the sampled u_0 on the real axis.
    """

    inner: BarycentricApproximant
    pole_set: PoleSet
    branch_sign: int = 1

    def __call__(self, z):
        return self.branch_sign * np.sqrt(evaluate(self.inner, z))


def _real_samples(grid: SampleGrid) -> np.ndarray:
    if not grid.is_real:
        raise InvalidInputError("sampled leading order must be real-valued")
    return grid.values.real


def fit_squared(grid: SampleGrid, tolerance: float = TABLE3_TOLERANCE) -> SqrtApproximant:
    """Square the samples, AAA-fit the squares, wrap the fit in a square root."""
    u = _real_samples(grid)
    squared = SampleGrid(grid.points, u * u)
    inner = aaa_fit(squared, tolerance)
    poles, residues = poles_and_residues(inner)
    pole_set = filter_and_pair(poles, residues, squared)
    sign = -1 if np.median(u) < 0 else 1
    return SqrtApproximant(inner, pole_set, sign)


def fit_direct(grid: SampleGrid, tolerance: float = TABLE3_TOLERANCE):
    """Plain AAA fit of the unsquared samples, for comparison."""
    _real_samples(grid)
    approx = aaa_fit(grid, tolerance)
    poles, residues = poles_and_residues(approx)
    return approx, filter_and_pair(poles, residues, grid)


class ResiduePattern(str, enum.Enum):
    DOMINANT_FIRST = "dominant_first"
    UNIFORM = "uniform"
    MIXED = "mixed"


def residue_pattern(pole_set: PoleSet, n_leading: int = 6) -> ResiduePattern:
    """Classify residue magnitudes of the ``n_leading`` pairs nearest the real axis.

    dominant_first: |a_1| >= 1.5 * median(|a_r|, r >= 2).
    uniform: max |a_r| / min |a_r| <= 2.
    Anything else is mixed.
    """
    if len(pole_set) < 3:
        raise InvalidInputError("residue pattern needs at least 3 pairs")
    mags = np.abs(pole_set.residues[:n_leading])
    if mags[0] >= 1.5 * np.median(mags[1:]):
        return ResiduePattern.DOMINANT_FIRST
    if mags.max() / mags.min() <= 2.0:
        return ResiduePattern.UNIFORM
    return ResiduePattern.MIXED


def _check_branch_path(sqrt_approx: SqrtApproximant, start: complex, x: float) -> None:
    s = np.linspace(0.0, 1.0, 4001)[1:]
    v = evaluate(sqrt_approx.inner, start + (x - start) * s)
    if np.any(np.abs(np.diff(np.angle(v))) > 0.5 * math.pi):
        raise QuadratureError(
            f"inner fit crosses the principal cut on the path {start} -> {x}"
        )


def singulant(sqrt_approx: SqrtApproximant, x: float, anchor: complex | None = None) -> complex:
    """chi(x) = integral from p_1 to x of i sqrt(2 u_0(t)) dt on a straight path.

    The integrand behaves like (t - p_1)^{-1/4} at the anchor. The first
    ``NEAR_ANCHOR`` of the path, where the rational fit itself loses precision,
    is integrated from that local power law; the rest by adaptive quadrature in
    s = sigma^4.
    """
    if anchor is None:
        if not sqrt_approx.pole_set.pairs:
            raise InvalidInputError("fit has no pole pairs to anchor the singulant")
        anchor = sqrt_approx.pole_set.pairs[0].pole
    anchor = complex(anchor)
    _check_branch_path(sqrt_approx, anchor, x)
    dz = x - anchor

    def f(s):
        return 1j * np.sqrt(2.0 * sqrt_approx(anchor + dz * s)) * dz

    s0 = min(NEAR_ANCHOR / abs(dz), 0.5)
    near = (4.0 / 3.0) * s0 * f(s0)
    far = _quad(lambda sig: f(sig**4) * 4.0 * sig**3, s0**0.25, 1.0, x)
    return complex(near + far)


def _quad(func, a: float, b: float, where) -> complex:
    # quad's roundoff warning fires on integrands with ~1e-13 evaluation noise
    # even when the result is fine, so judge by the error estimate instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(
            func, a, b, complex_func=True, limit=200, epsabs=1e-13, epsrel=1e-11
        )
    if not np.isfinite(val) or abs(err) > 1e-8 * max(abs(val), 1.0):
        raise QuadratureError(f"singulant quadrature error estimate {abs(err):.3g} at x={where}")
    return complex(val)


def exponential_scale(sqrt_approx: SqrtApproximant, x: float, epsilon: float) -> float:
    """|exp(-chi(x)/eps)|, the size of the exponentially small term."""
    return math.exp(-singulant(sqrt_approx, x).real / epsilon)


def nonlinear_exp_estimate(
    sqrt_approx: SqrtApproximant, x, epsilon: float, prefactor: complex = 1.0
):
    """WKB-type estimate 2 Re[L (2 u_0(x))^{-1/4} exp(-chi(x)/eps)].

    ``prefactor`` (L) is a free normalization: only the oscillation wavelength
    and the exponential eps-scaling are meaningful, not the amplitude.
    """
    if not epsilon > 0:
        raise InvalidInputError("epsilon must be positive")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if not sqrt_approx.pole_set.pairs:
        raise InvalidInputError("fit has no pole pairs to anchor the singulant")
    if np.any(xs <= sqrt_approx.pole_set.pairs[0].pole.real):
        raise InvalidInputError("x must lie right of the leading Stokes crossing")
    # one anchored integral to the leftmost point, then short real-axis segments
    flat = xs.ravel()
    order = np.argsort(flat, kind="stable")
    xsorted = flat[order]
    chi = np.empty(xsorted.shape, dtype=complex)
    chi[0] = singulant(sqrt_approx, float(xsorted[0]))

    def along_axis(t):
        return 1j * np.sqrt(2.0 * sqrt_approx(t))

    # the integrand is analytic within distance ~1 of the axis, so 8-point
    # Gauss-Legendre is exact to rounding on short segments
    a, b = xsorted[:-1], xsorted[1:]
    nodes, weights = np.polynomial.legendre.leggauss(8)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    t = mid[:, None] + half[:, None] * nodes[None, :]
    seg = half * (along_axis(t.ravel()).reshape(t.shape) @ weights)
    for k in np.nonzero(half > SHORT_SEGMENT)[0]:
        seg[k] = _quad(along_axis, float(a[k]), float(b[k]), b[k])
    chi[1:] = chi[0] + np.cumsum(seg)
    amp = (2.0 * sqrt_approx(xsorted)) ** -0.25
    vals = 2.0 * (prefactor * amp * np.exp(-chi / epsilon)).real
    out = np.empty(flat.shape)
    out[order] = vals
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))
