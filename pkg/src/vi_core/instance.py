"""
Problem kinds and VI instances
"""

from dataclasses import dataclass
from enum import Enum

from src.errors import DimensionError, InstanceError
from src.geometry import ConvexSet
from src.operators import IdentityField, VectorField


class VIKind(str, Enum):
    """The four inequality forms

    S:  <A(x), a(y) - a(x)> >= 0
    iS: <A(y) - A(x), a(x)> >= 0
    M:  <A(y), a(y) - a(x)> >= 0
    iM: <A(y) - A(x), a(y)> >= 0
    """
    S = "S"
    M = "M"
    iS = "iS"
    iM = "iM"

    @property
    def inverted(self) -> bool:
        return self in (VIKind.iS, VIKind.iM)

    @classmethod
    def parse(cls, value: str) -> "VIKind":
        try:
            return cls(value)
        except ValueError:
            raise InstanceError(f"Unknown problem kind '{value}'. Available: {', '.join(k.value for k in cls)}")


_SWAP = {VIKind.iS: VIKind.S, VIKind.S: VIKind.iS, VIKind.iM: VIKind.M, VIKind.M: VIKind.iM}


@dataclass(frozen=True, eq=False)
class VIInstance:
    kind: VIKind
    A: VectorField
    a: VectorField
    K: ConvexSet

    def __post_init__(self):
        object.__setattr__(self, "kind", VIKind(self.kind))
        dims = {
            "dim(K)": self.K.dim,
            "dim_in(A)": self.A.dim_in,
            "dim_out(A)": self.A.dim_out,
            "dim_in(a)": self.a.dim_in,
            "dim_out(a)": self.a.dim_out,
        }
        if len(set(dims.values())) != 1:
            raise DimensionError(f"Inconsistent instance dimensions: {dims}")

    @property
    def dim(self) -> int:
        return self.K.dim

    def with_kind(self, kind: VIKind) -> "VIInstance":
        return VIInstance(VIKind(kind), self.A, self.a, self.K)

    def swapped(self) -> "VIInstance":
        """Same left-hand sides with A and a exchanged (iS <-> S, iM <-> M)"""
        return VIInstance(_SWAP[self.kind], self.a, self.A, self.K)


def classical_instance(kind: VIKind, A: VectorField, K: ConvexSet) -> VIInstance:
    """The a = identity special case"""
    return VIInstance(VIKind(kind), A, IdentityField(K.dim), K)
