"""Finite-model laboratory for Stonean residuated lattices and their
triple decomposition (Boolean skeleton, dense part, connecting map)."""

from .core import (
    FiniteAlgebra,
    Subalgebra,
    ValidationReport,
    algebras_equal,
    boolean_skeleton,
    dense_elements,
    identity_battery,
    is_directly_indecomposable,
    is_distributive_lattice,
    leq,
    neg,
    product_algebra,
    validate,
)

__all__ = [
    "FiniteAlgebra",
    "Subalgebra",
    "ValidationReport",
    "algebras_equal",
    "boolean_skeleton",
    "dense_elements",
    "identity_battery",
    "is_directly_indecomposable",
    "is_distributive_lattice",
    "leq",
    "neg",
    "product_algebra",
    "validate",
]
