"""
Catalog of named operators

Every entry is stored twice: as a vectorised closed form (the field used for
computation) and as expression source text. expression_field() rebuilds the
entry from the text so the two encodings can be cross-checked.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from src import config
from src.errors import DimensionError, OperatorError, UnknownCatalogEntry
from src.exprlang import parse
from src.geometry import Box, ConvexSet
from src.operators.fields import AffineField, CatalogField, ExprField, IdentityField, PullbackField, VectorField

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    field: VectorField
    domain: ConvexSet
    provenance: str
    expression_sources: Tuple[str, ...]

    def expression_field(self) -> ExprField:
        """Independent re-encoding of the entry through the expression language"""
        dim = self.field.dim_in
        return ExprField(tuple(parse(source, dim) for source in self.expression_sources))


def _cube(dim: int) -> Box:
    return Box([-1.0] * dim, [1.0] * dim)


def _literal(value: float) -> str:
    return repr(float(value)) if value >= 0 else f"(-{repr(-float(value))})"


def _linear_sources(matrix: np.ndarray, columns: Tuple[str, ...], offset: Optional[np.ndarray] = None) -> Tuple[str, ...]:
    sources = []
    for i, row in enumerate(matrix):
        terms = [f"{_literal(m)}*{col}" for m, col in zip(row, columns)]
        if offset is not None:
            terms.append(_literal(offset[i]))
        sources.append(" + ".join(terms))
    return tuple(sources)


# Fixed published examples

def _ex432_A(points: np.ndarray) -> np.ndarray:
    x, y = points[:, 0], points[:, 1]
    return np.stack([x ** 2 * y, x * y], axis=1)


def _ex432_a(points: np.ndarray) -> np.ndarray:
    x = points[:, 0]
    return np.stack([np.ones_like(x), -x], axis=1)


def _ex434_A(points: np.ndarray) -> np.ndarray:
    x = points[:, 0]
    value = np.select([x <= -0.5, x <= 0.0], [-2.0 * x - 1.0, 2.0 * x + 1.0], -2.0 * x + 1.0)
    return value[:, None]


def _ex434_a(points: np.ndarray) -> np.ndarray:
    x = points[:, 0]
    value = np.where(x <= 0.5, -(2.0 / 3.0) * x + 1.0 / 3.0, -2.0 * x + 1.0)
    return value[:, None]


def _ex4331_A(points: np.ndarray) -> np.ndarray:
    x = points[:, 0]
    return np.where(x < 0.0, -1.0, 1.0)[:, None]


def _ex4331_a(points: np.ndarray) -> np.ndarray:
    return points[:, 0:1].copy()


_FIXED = {
    "ex432_A": (
        _ex432_A, 2, ("x^2*y", "x*y"),
        "published counterexample: A(x,y) = (x^2 y, xy) on [-1,1]^2; not of type ql, "
        "the inverted Stampacchia problem with a(x,y) = (1,-x) has no solution",
    ),
    "ex432_a": (
        _ex432_a, 2, ("1", "-x"),
        "published counterexample: a(x,y) = (1,-x) on [-1,1]^2",
    ),
    "ex434_A": (
        _ex434_A, 1,
        ("piecewise(x <= -0.5 -> -2*x - 1, x <= 0 -> 2*x + 1, else -> -2*x + 1)",),
        "published example: piecewise linear A on [-1,1] with closed-left brackets at -1/2 and 0; "
        "x0 = -1/2 solves the inverted Minty problem but not the inverted Stampacchia problem",
    ),
    "ex434_a": (
        _ex434_a, 1,
        ("piecewise(x <= 0.5 -> -(2/3)*x + 1/3, else -> -2*x + 1)",),
        "published example: a(x) = -(2/3)x + 1/3 on [-1,1/2], -2x + 1 on (1/2,1]",
    ),
    "ex4331_A": (
        _ex4331_A, 1, ("piecewise(x < 0 -> -1, else -> 1)",),
        "published example: step field, -1 on [-1,0) and 1 on [0,1]; of type ql but not strict ql",
    ),
    "ex4331_a": (
        _ex4331_a, 1, ("x",),
        "published example: a(x) = x on [-1,1]; x0 = 1/2 solves the inverted Minty problem only",
    ),
}


# Parametric entries

def _identity(dim: int, seed: int, inner: Optional[str]) -> CatalogEntry:
    sources = tuple(f"x{i + 1}" for i in range(dim))
    return CatalogEntry("identity", IdentityField(dim), _cube(dim), "identity map on [-1,1]^n", sources)


def _zero(dim: int, seed: int, inner: Optional[str]) -> CatalogEntry:
    field = CatalogField("zero", dim, dim, lambda points: np.zeros_like(points))
    return CatalogEntry("zero", field, _cube(dim), "zero map; every point solves every kind", ("0",) * dim)


def _affine_random(dim: int, seed: int, inner: Optional[str]) -> CatalogEntry:
    rng = np.random.default_rng(seed)
    matrix = rng.uniform(-1.0, 1.0, size=(dim, dim))
    offset = rng.uniform(-1.0, 1.0, size=dim)
    columns = tuple(f"x{i + 1}" for i in range(dim))
    return CatalogEntry(
        "affine_random", AffineField(matrix, offset), _cube(dim),
        f"seeded affine map M x + b, entries uniform on [-1,1], seed {seed}",
        _linear_sources(matrix, columns, offset),
    )


def _affine_psd_pullback(dim: int, seed: int, inner: Optional[str]) -> CatalogEntry:
    inner_name = inner or "identity"
    if inner_name == "affine_psd_pullback":
        raise OperatorError("affine_psd_pullback cannot wrap itself")
    inner_entry = catalog_lookup(inner_name, dim=dim, seed=seed)
    if inner_entry.field.dim_out != dim:
        raise DimensionError(f"Inner field '{inner_name}' has output dimension {inner_entry.field.dim_out}, expected {dim}")
    rng = np.random.default_rng(seed)
    root = rng.uniform(-1.0, 1.0, size=(dim, dim))
    matrix = root.T @ root
    columns = tuple(f"({source})" for source in inner_entry.expression_sources)
    return CatalogEntry(
        "affine_psd_pullback", PullbackField(matrix, inner_entry.field), inner_entry.domain,
        f"A = M o {inner_name} with M = R^T R positive semidefinite, R uniform on [-1,1], seed {seed}; "
        f"monotone relative to {inner_name} by construction",
        _linear_sources(matrix, columns),
    )


_PARAMETRIC: Dict[str, Callable[[int, int, Optional[str]], CatalogEntry]] = {
    "identity": _identity,
    "zero": _zero,
    "affine_random": _affine_random,
    "affine_psd_pullback": _affine_psd_pullback,
}

DEFAULT_PARAMETRIC_DIM = 2


def available_names() -> Tuple[str, ...]:
    return tuple(sorted(list(_FIXED) + list(_PARAMETRIC)))


def catalog_lookup(name: str, dim: Optional[int] = None, seed: Optional[int] = None,
                   inner: Optional[str] = None) -> CatalogEntry:
    """Resolve a catalog name into its entry

    Fixed entries have their own dimension; dim, when given, must match it.
    Parametric entries default to dimension 2 and seed config.DEFAULT_SEED.
    """
    if name in _FIXED:
        closed_form, fixed_dim, sources, provenance = _FIXED[name]
        if dim is not None and dim != fixed_dim:
            raise DimensionError(f"Catalog entry '{name}' is {fixed_dim}-dimensional, requested {dim}")
        field = CatalogField(name, fixed_dim, len(sources), closed_form)
        return CatalogEntry(name, field, _cube(fixed_dim), provenance, sources)

    if name in _PARAMETRIC:
        dim = DEFAULT_PARAMETRIC_DIM if dim is None else int(dim)
        if dim < 1:
            raise DimensionError(f"Catalog dimension must be >= 1, got {dim}")
        seed = config.DEFAULT_SEED if seed is None else int(seed)
        logger.debug("Building catalog entry %s (dim=%d, seed=%d)", name, dim, seed)
        return _PARAMETRIC[name](dim, seed, inner)

    raise UnknownCatalogEntry(name, available_names())
