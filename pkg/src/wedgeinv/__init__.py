"""Exact wedge-product invariants for abelian group actions.

Smith normal forms, exterior powers of finitely generated abelian groups,
symplectic forms on finite groups, birational classification of faithful
representations of diagonalizable groups, and quantum torus isomorphism
arithmetic.
"""

from .errors import ConsistencyError, InvalidInputError, NotEquivalentError
from .exactla import IntMatrix, RatMatrix, SnfResult, det, is_unimodular, pfaffian, snf
from .abelian import Character, FinGenAbGroup, GroupAutomorphism, GroupElement, QmodZ
from .exterior import ElementaryOp, WedgeClass, WedgeElement, WedgePower, class_of, wedge

__version__ = "0.1.0"

__all__ = [
    "Character",
    "ConsistencyError",
    "ElementaryOp",
    "FinGenAbGroup",
    "GroupAutomorphism",
    "GroupElement",
    "IntMatrix",
    "InvalidInputError",
    "NotEquivalentError",
    "QmodZ",
    "RatMatrix",
    "SnfResult",
    "WedgeClass",
    "WedgeElement",
    "WedgePower",
    "class_of",
    "det",
    "is_unimodular",
    "pfaffian",
    "snf",
    "wedge",
]
