"""
Vector fields (A and a) and the operator catalog
"""

from src.operators.catalog import CatalogEntry, available_names, catalog_lookup
from src.operators.fields import (
    AffineField,
    CatalogField,
    ExprField,
    IdentityField,
    PullbackField,
    ResidualField,
    VectorField,
    constant_field,
    evaluate,
    evaluate_many,
)

__all__ = [
    "CatalogEntry", "available_names", "catalog_lookup",
    "AffineField", "CatalogField", "ExprField", "IdentityField", "PullbackField",
    "ResidualField", "VectorField", "constant_field", "evaluate", "evaluate_many",
]
