"""Exact graded (multi)linear algebra over F_p, Z and Z/m."""

from .abelian import FgAbelianGroup, parse_group, tor_fg
from .algebra import (
    AlgebraPresentation,
    Element,
    GeneratorSpec,
    GradedAlgebra,
    Relation,
    expand_basis,
    multiply,
    tensor,
)
from .linalg import IntegerMatrix, SmithForm, Solution, smith_normal_form, solve_linear
from .rings import ZZ, CoefficientRing, Fp, IntegersMod, parse_ring

__all__ = [
    "ZZ",
    "AlgebraPresentation",
    "CoefficientRing",
    "Element",
    "FgAbelianGroup",
    "Fp",
    "GeneratorSpec",
    "GradedAlgebra",
    "IntegerMatrix",
    "IntegersMod",
    "Relation",
    "SmithForm",
    "Solution",
    "expand_basis",
    "multiply",
    "parse_group",
    "parse_ring",
    "smith_normal_form",
    "solve_linear",
    "tensor",
    "tor_fg",
]
