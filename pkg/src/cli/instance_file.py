"""
Instance-file schema, loading and canonical serialisation
"""

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.errors import InstanceError
from src.exprlang import parse, to_source
from src.geometry import ConvexSet, convex_set_from_description
from src.operators import AffineField, ExprField, VectorField, available_names, catalog_lookup
from src.vi_core import VIInstance, VIKind


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _rectangular(rows: List[List[float]], what: str) -> List[List[float]]:
    if not rows or not rows[0]:
        raise ValueError(f"{what} must be a non-empty list of non-empty rows")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{what} row {i} has {len(row)} entries, expected {width}")
    return rows


# Convex sets

class BoxSpec(_Strict):
    type: Literal["box"]
    lower: List[float]
    upper: List[float]

    @model_validator(mode="after")
    def check_bounds(self):
        if not self.lower or len(self.lower) != len(self.upper):
            raise ValueError(f"box lower and upper need the same non-zero length, "
                             f"got {len(self.lower)} and {len(self.upper)}")
        return self


class BallSpec(_Strict):
    type: Literal["ball"]
    center: List[float]
    radius: float = Field(..., gt=0)


class _VertexSpec(_Strict):
    vertices: List[List[float]]

    @field_validator("vertices")
    @classmethod
    def check_vertices(cls, rows):
        return _rectangular(rows, "vertices")


class SimplexSpec(_VertexSpec):
    type: Literal["simplex"]


class HullSpec(_VertexSpec):
    type: Literal["hull"]


SetSpec = Annotated[Union[BoxSpec, BallSpec, SimplexSpec, HullSpec], Field(discriminator="type")]


def _set_dimension(spec) -> int:
    if isinstance(spec, BoxSpec):
        return len(spec.lower)
    if isinstance(spec, BallSpec):
        return len(spec.center)
    return len(spec.vertices[0]) if spec.vertices else 0


# Fields

class CatalogFieldSpec(_Strict):
    source: Literal["catalog"]
    name: str
    seed: Optional[int] = None
    inner: Optional[str] = None


class ExprFieldSpec(_Strict):
    source: Literal["expr"]
    components: List[str] = Field(..., min_length=1)


class AffineFieldSpec(_Strict):
    source: Literal["affine"]
    matrix: List[List[float]]
    offset: Optional[List[float]] = None

    @model_validator(mode="after")
    def check_shape(self):
        _rectangular(self.matrix, "matrix")
        if self.offset is not None and len(self.offset) != len(self.matrix):
            raise ValueError(f"offset has {len(self.offset)} entries for a {len(self.matrix)}-row matrix")
        return self


FieldSpec = Annotated[Union[CatalogFieldSpec, ExprFieldSpec, AffineFieldSpec], Field(discriminator="source")]


class SolverSpec(_Strict):
    resolution: int = Field(41, ge=2)
    tol: Optional[float] = Field(None, ge=0)
    refine_levels: int = Field(0, ge=0)
    shrink: float = Field(0.5, gt=0, lt=1)


class LipschitzSpec(_Strict):
    L_A: float = Field(..., ge=0)
    L_a: float = Field(..., ge=0)
    bound_A: Optional[float] = Field(None, ge=0)
    bound_a: Optional[float] = Field(None, ge=0)


class CheckSpec(_Strict):
    """Parameters of one checker; unset values take the checker's defaults"""
    trials: Optional[int] = Field(None, ge=0)
    t_samples: Optional[int] = Field(None, ge=1)
    tol: Optional[float] = Field(None, ge=0)
    seed: Optional[int] = None
    n_points: Optional[int] = Field(None, ge=1)
    strict_margin: Optional[float] = Field(None, ge=0)
    direction: Optional[Literal["iS_subset_iM", "iM_subset_iS"]] = None
    resolution: Optional[int] = Field(None, ge=2)
    points: Optional[List[List[float]]] = None
    hypotheses: Optional[bool] = None
    dense_points: Optional[int] = Field(None, ge=3)
    forced: Optional[List[Dict[str, Any]]] = None

    @field_validator("points")
    @classmethod
    def check_points(cls, rows):
        return None if rows is None else _rectangular(rows, "points")


class InstanceFile(_Strict):
    description: Optional[str] = None
    dimension: int = Field(..., ge=1)
    set: SetSpec
    A: Optional[FieldSpec] = None
    a: Optional[FieldSpec] = None
    problem: VIKind = VIKind.iS
    solver: SolverSpec = Field(default_factory=SolverSpec)
    F: Optional[FieldSpec] = None
    checks: Dict[str, CheckSpec] = Field(default_factory=dict)
    lipschitz: Optional[LipschitzSpec] = None

    @model_validator(mode="after")
    def check_consistency(self):
        if _set_dimension(self.set) != self.dimension:
            raise ValueError(f"set has dimension {_set_dimension(self.set)}, expected {self.dimension}")
        for role in ("A", "a", "F"):
            spec = getattr(self, role)
            if isinstance(spec, CatalogFieldSpec) and spec.name not in available_names():
                raise ValueError(f"{role}: unknown catalog entry '{spec.name}'. "
                                 f"Available: {', '.join(available_names())}")
            if isinstance(spec, ExprFieldSpec) and len(spec.components) != self.dimension:
                raise ValueError(f"{role}: {len(spec.components)} components for dimension {self.dimension}")
        if (self.A is None) != (self.a is None):
            raise ValueError("A and a must be given together")
        if self.A is None and self.F is None:
            raise ValueError("an instance needs A and a, or F")
        return self


def field_from_spec(spec, dim: int) -> VectorField:
    """Build a vector field from a catalog, expression or affine spec"""
    if isinstance(spec, CatalogFieldSpec):
        return catalog_lookup(spec.name, dim=dim, seed=spec.seed, inner=spec.inner).field
    if isinstance(spec, ExprFieldSpec):
        return ExprField(tuple(parse(source, dim) for source in spec.components))
    offset = spec.offset if spec.offset is not None else [0.0] * len(spec.matrix)
    return AffineField(spec.matrix, offset)


@dataclass(frozen=True, eq=False)
class LoadedInstance:
    spec: InstanceFile
    K: ConvexSet
    A: Optional[VectorField]
    a: Optional[VectorField]
    F: Optional[VectorField]
    digest: str

    def vi_instance(self, kind: Optional[VIKind] = None) -> VIInstance:
        if self.A is None:
            raise InstanceError("The instance file defines no A and a")
        return VIInstance(VIKind(kind or self.spec.problem), self.A, self.a, self.K)


def parse_instance_text(text: str, origin: str = "<string>") -> InstanceFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"Malformed instance file {origin}: {exc.msg} at line {exc.lineno} "
                            f"column {exc.colno} (position {exc.pos + 1})") from exc
    try:
        return InstanceFile.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise InstanceError(f"Invalid instance file {origin}: {where}: {first['msg']}") from exc


def resolve_instance(spec: InstanceFile) -> LoadedInstance:
    """Build the set and fields; expression and catalog errors propagate"""
    dim = spec.dimension
    K = convex_set_from_description(spec.set.model_dump())
    A = field_from_spec(spec.A, dim) if spec.A is not None else None
    a = field_from_spec(spec.a, dim) if spec.a is not None else None
    F = field_from_spec(spec.F, dim) if spec.F is not None else None
    return LoadedInstance(spec, K, A, a, F, instance_digest(spec))


def load_instance(path: Union[str, Path]) -> LoadedInstance:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceError(f"Cannot read instance file {path}: {exc.strerror}") from exc
    return resolve_instance(parse_instance_text(text, str(path)))


def _canonical_field(spec: Optional[Dict[str, Any]], dim: int) -> Optional[Dict[str, Any]]:
    if spec is not None and spec.get("source") == "expr":
        spec = dict(spec, components=[to_source(parse(c, dim)) for c in spec["components"]])
    return spec


def canonical_dict(spec: InstanceFile) -> Dict[str, Any]:
    data = spec.model_dump(mode="json", exclude_none=True)
    for role in ("A", "a", "F"):
        if role in data:
            data[role] = _canonical_field(data[role], spec.dimension)
    return data


def canonical_json(spec: InstanceFile) -> str:
    """Stable serialisation: defaults filled in, sorted keys, expressions normalised"""
    return json.dumps(canonical_dict(spec), sort_keys=True, indent=2) + "\n"


def instance_digest(spec: InstanceFile) -> str:
    return hashlib.sha256(canonical_json(spec).encode("utf-8")).hexdigest()
