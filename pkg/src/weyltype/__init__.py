"""Exact computation with Lie algebras of Weyl type W(Gamma, n) and their modules."""

from .gamma import DerivationVector, GroupContext, GroupElement, membership
from .repmod import MatrixTuple, ModuleSpec, ModuleVector, act, direct_sum
from .scalars import FieldContext, Scalar
from .weyl import (
    AlgebraElement,
    ExtendedElement,
    bracket,
    cocycle,
    extended_bracket,
    sigma,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "DerivationVector",
    "ExtendedElement",
    "FieldContext",
    "GroupContext",
    "GroupElement",
    "MatrixTuple",
    "ModuleSpec",
    "ModuleVector",
    "Scalar",
    "act",
    "bracket",
    "cocycle",
    "direct_sum",
    "extended_bracket",
    "membership",
    "sigma",
]
