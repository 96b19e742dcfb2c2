import math

import numpy as np
import pytest

from aaastokes.nonlinear import (
    NONLINEAR_SCALE,
    ResiduePattern,
    exponential_scale,
    fit_direct,
    fit_squared,
    nonlinear_exp_estimate,
    nonlinear_forcing,
    nonlinear_leading_order,
    residue_pattern,
    singulant,
)
from aaastokes.rational_fit import InvalidInputError, PoleSet, SampleGrid, evaluate


@pytest.fixture(scope="module")
def grid():
    return SampleGrid.uniform(-10.0, 10.0, 0.1, lambda x: nonlinear_leading_order(x).real)


@pytest.fixture(scope="module")
def squared(grid):
    return fit_squared(grid, 1e-10)


@pytest.fixture(scope="module")
def direct(grid):
    return fit_direct(grid, 1e-10)[1]


def zero_crossings(x, y):
    k = np.nonzero(np.sign(y[:-1]) != np.sign(y[1:]))[0]
    return x[k] - y[k] * (x[k + 1] - x[k]) / (y[k + 1] - y[k])


def test_leading_order_values():
    assert abs(nonlinear_leading_order(0.0) - 9 / 32 * math.sqrt(2)) < 1e-15
    assert abs(nonlinear_leading_order(0.0) - 0.397748) < 1e-6
    x = np.linspace(-10, 10, 201)
    assert np.max(np.abs(nonlinear_leading_order(x).imag)) <= 1e-15


def test_forcing_is_square_of_leading_order():
    assert abs(nonlinear_forcing(0.0) - 81 / 1024 * 2) < 1e-15
    assert abs(nonlinear_forcing(0.0) - 0.158203) < 1e-6
    z = np.array([-3.0, 0.4, 2.0, 0.3 + 0.5j, -1 - 2j])
    assert np.allclose(nonlinear_forcing(z), nonlinear_leading_order(z) ** 2, rtol=1e-14, atol=0)


def test_squaring_identity_on_grid(grid):
    u = grid.values.real
    assert np.max(np.abs(u * u - nonlinear_leading_order(grid.points) ** 2)) <= 1e-15


def test_sqrt_wrapper_squares_to_inner(squared):
    for z in (0.0, 1.3, 0.2 + 0.4j):
        assert abs(squared(z) ** 2 - evaluate(squared.inner, z)) <= 1e-15


def test_branch_real_and_positive_on_interval(squared):
    x = np.linspace(-10, 10, 2001)
    v = squared(x)
    assert np.max(np.abs(v.imag)) <= 1e-10
    assert np.all(v.real > 0)
    assert np.max(np.abs(v.real - nonlinear_leading_order(x).real)) < 1e-6


def test_negative_samples_pick_negative_branch():
    g = SampleGrid.uniform(-10.0, 10.0, 0.1, lambda x: -nonlinear_leading_order(x).real)
    sq = fit_squared(g, 1e-10)
    assert sq.branch_sign == -1
    assert sq(1.0).real < 0


def test_fit_squared_requires_real_samples():
    g = SampleGrid(np.array([0.0, 1.0, 2.0]), np.array([1.0, 1.0j, 2.0]))
    with pytest.raises(InvalidInputError):
        fit_squared(g)


def test_squared_fit_pair1(squared):
    p1 = squared.pole_set.pairs[0]
    assert abs(p1.pole - (0.0018 + 1.0004j)) < 5e-4
    assert abs(abs(p1.residue) ** 0.5 - 0.2845) < 5e-4


def test_direct_fit_pair1(direct):
    p1 = direct.pairs[0]
    assert abs(p1.pole - (0.0020 + 1.0172j)) < 5e-4
    assert abs(abs(p1.residue) ** 0.5 - 0.2173) < 5e-4


def test_residue_patterns(squared, direct):
    assert residue_pattern(squared.pole_set) is ResiduePattern.DOMINANT_FIRST
    assert residue_pattern(direct) is ResiduePattern.UNIFORM


def test_residue_pattern_synthetic():
    poles = [0.1j * k + 1j for k in range(5)]
    assert residue_pattern(PoleSet.from_pairs(poles, [0.5] * 5)) is ResiduePattern.UNIFORM
    assert residue_pattern(PoleSet.from_pairs(poles, [3.0, 1, 1, 1, 1])) is ResiduePattern.DOMINANT_FIRST
    assert residue_pattern(PoleSet.from_pairs(poles, [1.0, 1, 1, 5, 1])) is ResiduePattern.MIXED


def test_residue_pattern_needs_three_pairs():
    with pytest.raises(InvalidInputError):
        residue_pattern(PoleSet.from_pairs([1j, 2j], [1.0, 1.0]))


def test_nearest_pole_improvement(squared, direct):
    assert squared.pole_set.p1_distance <= direct.p1_distance
    assert squared.pole_set.p1_distance < 5e-3 < direct.p1_distance


def test_singulant_is_stable(squared):
    chi = singulant(squared, 5.0)
    assert chi.real > 0
    # Re chi is constant along the real axis where u_0 > 0
    assert abs(singulant(squared, 3.0).real - chi.real) < 1e-8
    # the same integral against the exact singularity at i
    exact = singulant(squared, 5.0, anchor=squared.pole_set.pairs[0].pole)
    assert exact == chi


def test_wavelength_at_five(squared):
    eps = 0.1
    x = np.linspace(4.0, 6.0, 4001)
    y = nonlinear_exp_estimate(squared, x, eps)
    zc = zero_crossings(x, y)
    k = int(np.argmin(np.abs(zc - 5.0)))
    measured = zc[k + 1] - zc[k - 1]
    expected = 2 * math.pi * eps / math.sqrt(2 * squared(5.0).real)
    assert abs(measured - expected) <= 0.05 * expected


def test_log_linearity_in_inverse_eps(squared):
    x = np.linspace(4.0, 5.0, 2001)
    eps = np.array([0.05, 0.0667, 0.1, 0.2])
    logs = [math.log(np.max(np.abs(nonlinear_exp_estimate(squared, x, e)))) for e in eps]
    slope, _ = np.polyfit(1 / eps, logs, 1)
    chi = singulant(squared, 5.0)
    assert abs(slope + chi.real) <= 0.02 * chi.real


def test_halving_eps_squares_scale(squared):
    a = exponential_scale(squared, 5.0, 0.2)
    b = exponential_scale(squared, 5.0, 0.1)
    assert abs(b / a**2 - 1) < 1e-12


def test_estimate_magnitude_order(squared):
    x = np.linspace(4.0, 5.0, 2001)
    env = np.max(np.abs(nonlinear_exp_estimate(squared, x, 0.1)))
    assert 1e-5 <= env <= 1e-2


def test_estimate_left_of_crossing_raises(squared):
    with pytest.raises(InvalidInputError):
        nonlinear_exp_estimate(squared, -1.0, 0.1)
    with pytest.raises(InvalidInputError):
        nonlinear_exp_estimate(squared, 2.0, 0.0)


def test_scale_constant():
    assert NONLINEAR_SCALE == 9 / 32


def test_singulant_defined_along_axis(squared):
    # every point of a fine grid right of the Stokes crossing must integrate
    xs = np.linspace(0.5, 9.5, 91)
    chi = np.array([singulant(squared, x) for x in xs])
    assert np.all(np.isfinite(chi))
    assert np.ptp(chi.real) < 1e-8
    assert np.all(np.diff(chi.imag) > 0)


def test_estimate_segments_match_direct_quadrature(squared):
    xs = np.linspace(4.0, 6.0, 9)
    batch = nonlinear_exp_estimate(squared, xs, 0.1)
    single = np.array([nonlinear_exp_estimate(squared, np.array([x]), 0.1)[0] for x in xs])
    assert np.max(np.abs(batch - single)) <= 1e-7 * np.max(np.abs(single))
