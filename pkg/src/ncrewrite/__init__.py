"""Exact rewriting and verification for the Weyl algebra, its extension W',
the smooth Toeplitz algebra, tensor algebras and the associated seminorms."""
from .exactnum import Poly, Radical, TrigScalar, rising
from .freealg import Alphabet, NCPoly, apply_hom, parse
from .rewrite import (Budget, BudgetExceeded, RewriteSystem, builtin, critical_pairs, get_system,
                      normal_form, verify_identity, wprime_decompose)

__version__ = "0.1.0"

__all__ = ["Alphabet", "Budget", "BudgetExceeded", "NCPoly", "Poly", "Radical", "RewriteSystem",
           "TrigScalar", "apply_hom", "builtin", "critical_pairs", "get_system", "normal_form",
           "parse", "rising", "verify_identity", "wprime_decompose"]
