"""Computational toolkit for extension DGAs, Hochschild homology and THH splittings."""

from .basis import (
    BudgetExhausted,
    MonoidBasis,
    ProvenNone,
    Violation,
    check_monoid_basis,
    search_monoid_basis,
    wedge_model,
)
from .dga import DGA, GradedRingTable, formal_dga, homology, homology_ring
from .gring import Fp, GradedAlgebra, ZZ, IntegersMod, parse_ring, tensor, tor_fg
from .hochschild import hh, hh_dga, hh_over_Z
from .obstruct import bockstein_q1_obstruction, extension_status, forced_unit_map, square_obstruction_p2
from .steenrod import apply_dl, apply_dl_tensor, dual_steenrod, hfp_homology_of_hz, parse_word
from .thh import THHTable, shipped_table, thh_groups

__version__ = "0.1.0"

__all__ = [
    "BudgetExhausted", "DGA", "Fp", "GradedAlgebra", "GradedRingTable", "IntegersMod", "MonoidBasis",
    "ProvenNone", "THHTable", "Violation", "ZZ", "apply_dl", "apply_dl_tensor", "bockstein_q1_obstruction",
    "check_monoid_basis", "dual_steenrod", "extension_status", "forced_unit_map", "formal_dga",
    "hfp_homology_of_hz", "hh", "hh_dga", "hh_over_Z", "homology", "homology_ring", "parse_ring",
    "parse_word", "search_monoid_basis", "shipped_table", "square_obstruction_p2", "tensor", "thh_groups",
    "tor_fg", "wedge_model",
]
