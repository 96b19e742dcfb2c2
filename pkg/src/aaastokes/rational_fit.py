"""AAA rational approximation on real sample grids.

Fits are held in barycentric form

    r(z) = sum_j w_j f_j / (z - z_j)  /  sum_j w_j / (z - z_j)

with support points z_j drawn greedily from the sample grid. Poles come from
the arrowhead generalized eigenvalue problem of the denominator, residues
from n(p) / d'(p).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

__all__ = [
    "InvalidInputError",
    "SampleGrid",
    "BarycentricApproximant",
    "PolePair",
    "DiscardedPole",
    "PoleSet",
    "aaa_fit",
    "evaluate",
    "poles_and_residues",
    "filter_and_pair",
    "PAIRING_TOL",
    "FROISSART_TOL",
]

PAIRING_TOL = 1e-8
FROISSART_TOL = 1e-13
# eigenvalues beyond this multiple of max|z_j| are the spurious infinite ones
INFINITE_EIG_FACTOR = 1e13


class InvalidInputError(ValueError):
    """Raised when inputs violate an operation's preconditions."""


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """Real abscissae with (possibly complex) function values."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.points, dtype=float).ravel()
        f = np.asarray(self.values, dtype=complex).ravel()
        if x.shape != f.shape:
            raise InvalidInputError(
                f"points and values differ in length ({x.size} vs {f.size})"
            )
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("sample points must be finite")
        if not np.all(np.isfinite(f)):
            raise InvalidInputError("sample values must be finite")
        if x.size > 1 and np.any(np.diff(x) <= 0):
            raise InvalidInputError("sample points must be strictly increasing")
        x.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "values", f)

    @classmethod
    def uniform(cls, a: float, b: float, dx: float, func: Callable) -> "SampleGrid":
        """Sample ``func`` on ``a, a + dx, ..., b``.

        Abscissae are rounded to 12 decimals so that e.g. ``0.0`` is hit exactly
        rather than as ``-1.7e-16``.
        """
        if not dx > 0:
            raise InvalidInputError("dx must be positive")
        if not b > a:
            raise InvalidInputError("interval must be nonempty")
        n = int(round((b - a) / dx))
        x = np.round(a + dx * np.arange(n + 1), 12)
        return cls(x, func(x))

    def __len__(self) -> int:
        return self.points.size

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0))

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.points[0]), float(self.points[-1])


@dataclass(frozen=True, eq=False)
class BarycentricApproximant:
    support_points: np.ndarray
    support_values: np.ndarray
    weights: np.ndarray
    tolerance_used: float
    iterations: int
    converged: bool = True
    max_error: float = 0.0
    error_history: tuple = ()

    @property
    def m(self) -> int:
        return self.support_points.size

    def __call__(self, z):
        return evaluate(self, z)


def _weights(A: np.ndarray) -> np.ndarray:
    # right singular vector for the smallest singular value; sign fixed so
    # that repeated runs and real/complex paths agree
    _, _, vh = np.linalg.svd(A, full_matrices=True)
    w = vh[-1].conj()
    k = int(np.argmax(np.abs(w)))
    phase = w[k] / abs(w[k])
    return w / phase


def aaa_fit(
    grid: SampleGrid, rel_tolerance: float = 1e-13, max_support: int = 100
) -> BarycentricApproximant:
    """Greedy AAA fit of ``grid``.

    Stops once the largest error over the non-support samples is at most
    ``rel_tolerance * max|f|``, or when ``max_support`` support points are in
    use (``converged`` is then False). Real-valued data is fitted in real
    arithmetic, so the fit is exactly conjugate symmetric.
    """
    if not isinstance(grid, SampleGrid):
        raise InvalidInputError("aaa_fit expects a SampleGrid")
    if len(grid) < 2:
        raise InvalidInputError("need at least 2 samples")
    if not 0 < rel_tolerance < 1:
        raise InvalidInputError("rel_tolerance must lie in (0, 1)")
    if max_support < 1:
        raise InvalidInputError("max_support must be >= 1")

    Z = grid.points
    F = grid.values.real.copy() if grid.is_real else grid.values.copy()
    fmax = float(np.max(np.abs(F)))
    threshold = rel_tolerance * fmax

    mask = np.ones(Z.size, dtype=bool)  # True on non-support points
    idx: list[int] = []
    R = np.full_like(F, np.mean(F))
    w = np.ones(1, dtype=F.dtype)
    history = []
    converged = False
    err = math.inf

    for _ in range(min(max_support, Z.size - 1)):
        resid = np.abs(F - R)
        resid[~mask] = -1.0
        j = int(np.argmax(resid))  # argmax returns the first index on ties
        idx.append(j)
        mask[j] = False

        zj, fj = Z[idx], F[idx]
        C = 1.0 / (Z[mask, None] - zj[None, :])
        A = (F[mask, None] - fj[None, :]) * C
        w = _weights(A)

        R = F.copy()
        R[mask] = (C @ (w * fj)) / (C @ w)
        err = float(np.max(np.abs(F - R)))
        history.append(err)
        if err <= threshold:
            converged = True
            break

    zj = Z[idx].astype(complex)
    fj = F[idx].astype(complex)
    return BarycentricApproximant(
        support_points=zj,
        support_values=fj,
        weights=np.asarray(w, dtype=complex),
        tolerance_used=rel_tolerance,
        iterations=len(history),
        converged=converged,
        max_error=err,
        error_history=tuple(history),
    )


def evaluate(approx: BarycentricApproximant, z):
    """Evaluate the barycentric quotient at ``z`` (scalar or array).

    Support points return their stored value. Exact zeros of the denominator
    return ``complex(inf, 0)`` rather than NaN.
    """
    zj, fj, wj = approx.support_points, approx.support_values, approx.weights
    zv = np.asarray(z, dtype=complex)
    flat = zv.ravel()
    D = flat[:, None] - zj[None, :]
    hit_row, hit_col = np.nonzero(D == 0)
    D[hit_row, hit_col] = 1.0
    C = 1.0 / D
    num = C @ (wj * fj)
    den = C @ wj
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / den
    r[den == 0] = complex(np.inf, 0.0)
    r[hit_row] = fj[hit_col]
    if zv.ndim == 0:
        return complex(r[0])
    return r.reshape(zv.shape)


def poles_and_residues(approx: BarycentricApproximant) -> tuple[np.ndarray, np.ndarray]:
    """Finite poles of the approximant and their residues.

    Poles solve the (m+1)x(m+1) arrowhead pencil ``E v = lambda B v``; the two
    eigenvalues at infinity, and any eigenvalue sitting exactly on a support
    point (a zero weight), are dropped. Residues are ``n(p) / d'(p)``.
    """
    zj, fj, wj = approx.support_points, approx.support_values, approx.weights
    m = zj.size
    if m < 2:
        return np.empty(0, complex), np.empty(0, complex)

    real = bool(np.all(zj.imag == 0) and np.all(wj.imag == 0))
    dtype = float if real else complex
    E = np.zeros((m + 1, m + 1), dtype=dtype)
    E[0, 1:] = wj.real if real else wj
    E[1:, 0] = 1.0
    E[1:, 1:] = np.diag(zj.real if real else zj)
    B = np.eye(m + 1)
    B[0, 0] = 0.0

    ev = scipy.linalg.eigvals(E, B, overwrite_a=True, check_finite=False)
    scale = INFINITE_EIG_FACTOR * max(float(np.max(np.abs(zj))), 1.0)
    poles = ev[np.isfinite(ev) & (np.abs(ev) <= scale)]
    # a support point with zero weight shows up as an eigenvalue but is removable
    poles = poles[~np.any(poles[:, None] == zj[None, :], axis=1)]
    if poles.size == 0:
        return np.empty(0, complex), np.empty(0, complex)
    if real:
        # conjugate eigenvalues from a real pencil: make them exact mirrors
        poles = np.where(np.abs(poles.imag) == 0, poles.real + 0j, poles)
    poles = np.sort_complex(poles)

    C = 1.0 / (poles[:, None] - zj[None, :])
    num = C @ (wj * fj)
    dden = -(C**2) @ wj
    residues = num / dden
    return poles, residues


@dataclass(frozen=True)
class PolePair:
    """Upper-half-plane member of a conjugate pole pair."""

    pole: complex
    residue: complex
    pair_index: int

    @property
    def conjugate_pole(self) -> complex:
        return self.pole.conjugate()

    @property
    def conjugate_residue(self) -> complex:
        return self.residue.conjugate()


@dataclass(frozen=True)
class DiscardedPole:
    pole: complex
    residue: complex
    reason: str


@dataclass(frozen=True)
class PoleSet:
    pairs: tuple[PolePair, ...] = ()
    discarded: tuple[DiscardedPole, ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def poles(self) -> np.ndarray:
        return np.array([p.pole for p in self.pairs], dtype=complex)

    @property
    def residues(self) -> np.ndarray:
        return np.array([p.residue for p in self.pairs], dtype=complex)

    @property
    def p1_distance(self) -> float:
        """Distance from pair 1's pole to the branch point at ``i``."""
        if not self.pairs:
            return math.nan
        return abs(self.pairs[0].pole - 1j)

    @classmethod
    def from_pairs(cls, poles: Sequence[complex], residues: Sequence[complex]) -> "PoleSet":
        """Build a PoleSet from upper-half-plane poles and their residues."""
        items = sorted(zip(poles, residues), key=lambda pr: complex(pr[0]).imag)
        pairs = []
        for k, (p, a) in enumerate(items, start=1):
            p = complex(p)
            if not p.imag > 0:
                raise InvalidInputError(f"pair pole {p} is not in the upper half plane")
            pairs.append(PolePair(p, complex(a), k))
        return cls(tuple(pairs), ())

    def all_poles(self) -> tuple[np.ndarray, np.ndarray]:
        """Both members of every pair, as ``(poles, residues)``."""
        p, a = self.poles, self.residues
        return np.concatenate([p, p.conj()]), np.concatenate([a, a.conj()])


def filter_and_pair(
    poles: Sequence[complex],
    residues: Sequence[complex],
    grid: SampleGrid | None = None,
    pairing_tol: float = PAIRING_TOL,
    froissart_tol: float = FROISSART_TOL,
) -> PoleSet:
    """Drop real-axis artefacts and Froissart doublets, pair the rest.

    Remaining poles are matched to their complex conjugates; a pair needs both
    ``|p - conj(q)|`` and ``|a_p - conj(a_q)|`` below ``pairing_tol``.
    """
    poles = np.asarray(poles, dtype=complex).ravel()
    residues = np.asarray(residues, dtype=complex).ravel()
    if poles.shape != residues.shape:
        raise InvalidInputError("poles and residues differ in length")

    discarded: list[DiscardedPole] = []
    keep = []
    amax = float(np.max(np.abs(residues))) if residues.size else 0.0
    for p, a in zip(poles, residues):
        if abs(p.imag) < pairing_tol:
            reason = "real-axis artefact"
            if grid is not None:
                lo, hi = grid.interval
                where = "inside" if lo <= p.real <= hi else "outside"
                reason += f" ({where} sample interval)"
            discarded.append(DiscardedPole(complex(p), complex(a), reason))
        elif abs(a) < froissart_tol * amax:
            discarded.append(DiscardedPole(complex(p), complex(a), "Froissart doublet"))
        else:
            keep.append((complex(p), complex(a)))

    upper = sorted([pa for pa in keep if pa[0].imag > 0], key=lambda pa: (pa[0].imag, pa[0].real))
    lower = [pa for pa in keep if pa[0].imag < 0]
    used = [False] * len(lower)
    pairs: list[PolePair] = []
    for p, a in upper:
        best, best_d = -1, math.inf
        for k, (q, b) in enumerate(lower):
            if used[k]:
                continue
            d = abs(p - q.conjugate())
            if d < best_d:
                best, best_d = k, d
        if best >= 0 and best_d < pairing_tol and abs(a - lower[best][1].conjugate()) < pairing_tol:
            used[best] = True
            pairs.append(PolePair(p, a, len(pairs) + 1))
        else:
            discarded.append(DiscardedPole(p, a, "unpaired"))
    for k, (q, b) in enumerate(lower):
        if not used[k]:
            discarded.append(DiscardedPole(q, b, "unpaired"))

    return PoleSet(tuple(pairs), tuple(discarded))


def fit_pole_set(grid: SampleGrid, rel_tolerance: float, max_support: int = 100):
    """Convenience: fit, extract poles and pair them in one call."""
    approx = aaa_fit(grid, rel_tolerance, max_support)
    poles, residues = poles_and_residues(approx)
    return approx, filter_and_pair(poles, residues, grid)


__all__.append("fit_pole_set")
