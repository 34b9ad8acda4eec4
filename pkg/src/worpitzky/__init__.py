"""Worpitzky-compatible subsets of positive roots and freeness of Shi-Catalan deformations."""
from .errors import (FitError, GuardExceeded, InvalidRootSystem, InvalidSubset, InvariantViolation,
                     WorpitzkyError)
from .rootsys import RootSystem, build, format_root, parse_root, parse_roots
from .subsets import RootSubset, classify, context
from .weyl import eulerian_polynomial
from .quasipoly import characteristic_quasipolynomial, shi_arrangement, verify_identity
from .freeness import CentralArrangement, cone_of, is_free, is_shi_free, rank2_multi_exponents

__all__ = [
    "FitError", "GuardExceeded", "InvalidRootSystem", "InvalidSubset", "InvariantViolation", "WorpitzkyError",
    "RootSystem", "build", "format_root", "parse_root", "parse_roots",
    "RootSubset", "classify", "context",
    "eulerian_polynomial",
    "characteristic_quasipolynomial", "shi_arrangement", "verify_identity",
    "CentralArrangement", "cone_of", "is_free", "is_shi_free", "rank2_multi_exponents",
]
__version__ = "0.1.0"
