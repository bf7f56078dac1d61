"""
Evaluation and printing of expression trees
"""

import math
from dataclasses import dataclass
from typing import Sequence

from src.errors import DimensionError, ExpressionEvaluationError
from src.exprlang.ast import And, BinOp, Call, Compare, Condition, Neg, Node, Num, Piecewise, Pow, Var
from src.exprlang.parser import parse_node


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise ExpressionEvaluationError(f"{what} produced a non-finite value")
    return value


def evaluate_node(node: Node, coords: Sequence[float]) -> float:
    match node:
        case Num(value=value):
            return value
        case Var(index=index):
            return float(coords[index])
        case Neg(operand=operand):
            return -evaluate_node(operand, coords)
        case BinOp(op=op, left=left, right=right):
            lhs = evaluate_node(left, coords)
            rhs = evaluate_node(right, coords)
            if op == "+":
                return _finite(lhs + rhs, "addition")
            if op == "-":
                return _finite(lhs - rhs, "subtraction")
            if op == "*":
                return _finite(lhs * rhs, "multiplication")
            if rhs == 0.0:
                raise ExpressionEvaluationError("division by zero")
            return _finite(lhs / rhs, "division")
        case Pow(base=base, exponent=exponent):
            value = evaluate_node(base, coords)
            if value == 0.0 and exponent < 0:
                raise ExpressionEvaluationError("zero raised to a negative power")
            try:
                return _finite(value ** exponent, "power")
            except OverflowError:
                raise ExpressionEvaluationError("power overflowed")
        case Call(func=func, args=args):
            values = [evaluate_node(arg, coords) for arg in args]
            if func == "abs":
                return abs(values[0])
            return min(values) if func == "min" else max(values)
        case Piecewise(branches=branches, otherwise=otherwise):
            for condition, branch in branches:
                if evaluate_condition(condition, coords):
                    return evaluate_node(branch, coords)
            return evaluate_node(otherwise, coords)
    raise ExpressionEvaluationError(f"Cannot evaluate node {node!r}")


def evaluate_condition(condition: Condition, coords: Sequence[float]) -> bool:
    if isinstance(condition, And):
        return all(evaluate_condition(term, coords) for term in condition.terms)
    lhs = evaluate_node(condition.left, coords)
    rhs = evaluate_node(condition.right, coords)
    if condition.op == "<":
        return lhs < rhs
    if condition.op == "<=":
        return lhs <= rhs
    if condition.op == ">":
        return lhs > rhs
    return lhs >= rhs


def to_source(node) -> str:
    """Fully parenthesised source text that re-parses to an equivalent tree"""
    if isinstance(node, Expression):
        node = node.root
    match node:
        case Num(value=value):
            return repr(value) if value >= 0 else f"(-{repr(-value)})"
        case Var(index=index):
            return f"x{index + 1}"
        case Neg(operand=operand):
            return f"(-{to_source(operand)})"
        case BinOp(op=op, left=left, right=right):
            return f"({to_source(left)} {op} {to_source(right)})"
        case Pow(base=base, exponent=exponent):
            return f"({to_source(base)}^{exponent})"
        case Call(func=func, args=args):
            return f"{func}({', '.join(to_source(arg) for arg in args)})"
        case Compare(op=op, left=left, right=right):
            return f"{to_source(left)} {op} {to_source(right)}"
        case And(terms=terms):
            return " and ".join(to_source(term) for term in terms)
        case Piecewise(branches=branches, otherwise=otherwise):
            parts = [f"{to_source(c)} -> {to_source(e)}" for c, e in branches]
            parts.append(f"else -> {to_source(otherwise)}")
            return f"piecewise({', '.join(parts)})"
    raise TypeError(f"Not an expression node: {node!r}")


@dataclass(frozen=True)
class Expression:
    """A parsed scalar expression over x1..x{dim}"""
    root: Node
    dim: int
    source: str

    def __call__(self, coords: Sequence[float]) -> float:
        return evaluate(self, coords)


def parse(source: str, dim: int) -> Expression:
    """Parse source text into an Expression over dim variables"""
    return Expression(parse_node(source, dim), dim, source)


def evaluate(expr: Expression, coords: Sequence[float]) -> float:
    """Evaluate at a point whose dimension matches the expression"""
    if len(coords) != expr.dim:
        raise DimensionError(f"Expression over {expr.dim} variables evaluated at a point of dimension {len(coords)}")
    return evaluate_node(expr.root, coords)
