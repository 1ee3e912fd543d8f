"""Exact cohomology rings, pairings and Duistermaat-Heckman densities for
symplectic quotients of the r-qubit torus action on projective space."""

__version__ = "0.1.0"

from .algebra import Polynomial, RationalFunction, parse_polynomial, poly_mul, poly_pow, residue_at_zero
from .action import (
    WeightMatrix,
    build_weight_matrix,
    canonical_gamma,
    fixed_point,
    isotropy_weights,
    polarize,
    stage_factors,
)
from .walls import build_dendrite, enumerate_walls, locate_chamber
from .residues import ClassSpec, dh_density, pairing, restrict_class
from .ring import kernel_generators, ring_presentation
from .groebner import groebner_basis, normal_form, poincare_series
from .symmetric import symmetric_expand
from .oracle import SampleConfig, compare_density, sample_marginals

__all__ = [
    "Polynomial", "RationalFunction", "parse_polynomial", "poly_mul", "poly_pow", "residue_at_zero",
    "WeightMatrix", "build_weight_matrix", "canonical_gamma", "fixed_point", "isotropy_weights",
    "polarize", "stage_factors", "build_dendrite", "enumerate_walls", "locate_chamber",
    "ClassSpec", "dh_density", "pairing", "restrict_class", "kernel_generators", "ring_presentation",
    "groebner_basis", "normal_form", "poincare_series", "symmetric_expand",
    "SampleConfig", "compare_density", "sample_marginals",
]
