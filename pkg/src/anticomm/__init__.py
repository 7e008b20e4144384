"""Exact linear algebra around the map X -> det(AX + XA).

Modules: ``field`` (Q and GF(p) scalars), ``matrix`` (dense exact
matrices), ``canonical`` (Fitting split, nilpotent Jordan form, invariant
factors), ``witness`` (similarity witnesses), ``classify`` (sign classes and
determinant identities), ``search`` (scans, surveys, regression suite).
"""

from .field import GF, Q, Field
from .matrix import Matrix, Permutation, determinant, adjugate, rank, phi

__all__ = ["GF", "Q", "Field", "Matrix", "Permutation", "determinant", "adjugate", "rank", "phi"]
