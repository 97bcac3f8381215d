"""Exact Kazhdan-Lusztig combinatorics for the Hecke algebra of the symmetric group.

The main object is ``KLContext``, a memo of KL polynomials, mu-values and
structure constants shared across ranks.  ``stab`` builds products of dual KL
elements with KL elements on top of it and tracks how they change with rank.
"""
__version__ = "0.1.0"

from .errors import (
    BasisMismatch, ChecksumMismatch, CoefficientOverflow, FormatVersionMismatch, KLError,
    ParseError, RankExceeded, RankMismatch, RouteDisagreement, ShapeMismatch, SizeMismatch,
)
from .laurent import LaurentPoly
from .symgroup import Permutation, parse_permutation, s, word_string
from .hecke import Basis, HeckeElt
from .kl import KLContext, load_context, save_context
from .rsk import Partition, StandardTableau, rs, rs_inverse, shape
from .stab import (
    DualExpansion, StabilityReport, stability_scan, stabilized_theta, theta_on_simple,
)

__all__ = [
    "KLError", "ParseError", "CoefficientOverflow", "RankExceeded", "RankMismatch",
    "BasisMismatch", "ShapeMismatch", "SizeMismatch", "RouteDisagreement",
    "FormatVersionMismatch", "ChecksumMismatch", "LaurentPoly", "Permutation",
    "parse_permutation", "s", "word_string", "Basis", "HeckeElt", "KLContext",
    "load_context", "save_context", "Partition", "StandardTableau", "rs", "rs_inverse",
    "shape", "DualExpansion", "StabilityReport", "stability_scan", "stabilized_theta",
    "theta_on_simple",
]
