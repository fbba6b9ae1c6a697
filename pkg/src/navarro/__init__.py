"""Galois action on odd-degree characters and Harish-Chandra series.

Exact cyclotomic arithmetic, permutation groups, character tables over
cyclotomic fields, and the Hecke-algebra side of the Galois action on
principal series constituents.
"""

from .cyclotomic import Cyclotomic, E, apply_sigma, galois_exponent
from .perm import PermGroup, SizeGuardError

__all__ = ["Cyclotomic", "E", "apply_sigma", "galois_exponent", "PermGroup",
           "SizeGuardError"]
__version__ = "0.1.0"
