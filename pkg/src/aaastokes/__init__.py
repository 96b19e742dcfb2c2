"""Rational (AAA) leading orders for exponential asymptotics and Stokes switching."""

from .rational_fit import (
    BarycentricApproximant,
    DiscardedPole,
    InvalidInputError,
    PolePair,
    PoleSet,
    SampleGrid,
    aaa_fit,
    evaluate,
    filter_and_pair,
    fit_pole_set,
    poles_and_residues,
)

__all__ = [
    "BarycentricApproximant",
    "DiscardedPole",
    "InvalidInputError",
    "PolePair",
    "PoleSet",
    "SampleGrid",
    "aaa_fit",
    "evaluate",
    "filter_and_pair",
    "fit_pole_set",
    "poles_and_residues",
]

__version__ = "0.1.0"
