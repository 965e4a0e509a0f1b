"""Relaxation hierarchies for the generalized moment problem.

Moment problems over the probability simplex get an RLT-style linear
programming hierarchy; problems over the unit sphere get a moment-matrix
semidefinite hierarchy.  Application front ends cover polynomial and
rational optimization, stable-set bounds, and cubature-style moment
matching.
"""

from .model import (
    Domain,
    GmpInstance,
    MomentVector,
    monomial_index_set,
    reference_moments,
    validate_and_canonicalize,
)
from .polynomials import (
    Polynomial,
    b_of_f,
    bernstein_approx,
    homogenize,
    polya_exponent_bound,
    polya_shift,
)

__version__ = "0.1.0"

__all__ = [
    "Domain",
    "GmpInstance",
    "MomentVector",
    "Polynomial",
    "b_of_f",
    "bernstein_approx",
    "homogenize",
    "monomial_index_set",
    "polya_exponent_bound",
    "polya_shift",
    "reference_moments",
    "validate_and_canonicalize",
]
