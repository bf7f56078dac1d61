"""
Expression tree nodes
All nodes are immutable; variables are stored with 0-based indices
"""

from dataclasses import dataclass
from typing import Tuple, Union


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str  # abs, min, max
    args: Tuple["Node", ...]


@dataclass(frozen=True)
class Compare:
    op: str  # one of < <= > >=
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class And:
    terms: Tuple[Compare, ...]


Condition = Union[Compare, And]


@dataclass(frozen=True)
class Piecewise:
    branches: Tuple[Tuple[Condition, "Node"], ...]
    otherwise: "Node"


Node = Union[Num, Var, Neg, BinOp, Pow, Call, Piecewise]
