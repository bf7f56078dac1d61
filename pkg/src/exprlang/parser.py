"""
Tokenizer and precedence-climbing parser for field expressions

Precedence, tightest first: ^ (right-assoc, integer literal exponent),
unary minus, * /, + -. Conditions appear only inside piecewise(...).
"""

import math
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from src.errors import ExpressionSyntaxError
from src.exprlang.ast import And, BinOp, Call, Compare, Condition, Neg, Node, Num, Piecewise, Pow, Var


@dataclass(frozen=True)
class Token:
    kind: str  # number, ident, op, end
    text: str
    position: int  # 1-based


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>->|<=|>=|≤|≥|[-+*/^(),<>])"
    r")"
)

_RELOPS = {"<": "<", "<=": "<=", ">": ">", ">=": ">=", "≤": "<=", "≥": ">="}
_BINARY_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}
_FUNCTIONS = {"abs": (1, 1), "min": (1, None), "max": (1, None)}
_ALIASES = {"x": 0, "y": 1, "z": 2}
_VAR_RE = re.compile(r"x(\d+)$")

# |x|^k overflows float64 for |x| >= 2 past this
MAX_EXPONENT = 1024


def tokenize(source: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(source, pos)
        if match is None or match.end() == pos:
            offset = len(source[pos:]) - len(source[pos:].lstrip())
            raise ExpressionSyntaxError(f"Unexpected character {source[pos + offset]!r}",
                                        pos + offset + 1, source)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start + 1))
        pos = match.end()
    tokens.append(Token("end", "", len(source) + 1))
    return tokens


class Parser:
    """Recursive precedence-climbing parser over a token list"""

    def __init__(self, source: str, dim: int):
        self.source = source
        self.dim = dim
        self.tokens = tokenize(source)
        self.index = 0

    # token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str, token: Optional[Token] = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, token.position, self.source)

    def _is_op(self, text: str) -> bool:
        return self.current.kind == "op" and self.current.text == text

    def _expect_op(self, text: str) -> Token:
        if not self._is_op(text):
            found = self.current.text or "end of input"
            raise self._error(f"Expected '{text}' but found '{found}'")
        return self._advance()

    # grammar

    def parse(self) -> Node:
        node = self.expression()
        if self.current.kind != "end":
            raise self._error(f"Unexpected '{self.current.text}'")
        return node

    def expression(self, min_precedence: int = 1) -> Node:
        left = self.unary()
        while self.current.kind == "op" and self.current.text in _BINARY_PRECEDENCE:
            precedence = _BINARY_PRECEDENCE[self.current.text]
            if precedence < min_precedence:
                break
            op = self._advance().text
            right = self.expression(precedence + 1)
            left = BinOp(op, left, right)
        return left

    def unary(self) -> Node:
        if self._is_op("-"):
            self._advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.primary()
        if not self._is_op("^"):
            return base
        self._advance()
        return Pow(base, self._exponent())

    def _exponent(self) -> int:
        sign = 1
        if self._is_op("-"):
            self._advance()
            sign = -1
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise self._error("Exponent must be an integer literal")
        self._advance()
        digits = token.text.lstrip("0") or "0"
        if len(digits) > len(str(MAX_EXPONENT)) or int(digits) > MAX_EXPONENT:
            raise self._error(f"Exponent exceeds {MAX_EXPONENT}", token)
        value = sign * int(digits)
        if self._is_op("^"):
            # right-associative: a^b^c = a^(b^c), folded while it stays integral
            caret = self._advance()
            inner = self._exponent()
            if inner < 0:
                raise self._error("Exponent must be an integer literal", caret)
            if abs(value) >= 2 and inner > MAX_EXPONENT.bit_length():
                raise self._error(f"Exponent exceeds {MAX_EXPONENT}", caret)
            value = value ** inner
            if abs(value) > MAX_EXPONENT:
                raise self._error(f"Exponent exceeds {MAX_EXPONENT}", caret)
        return value

    def primary(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise self._error(f"Number '{token.text}' is out of double range", token)
            return Num(value)
        if self._is_op("("):
            self._advance()
            node = self.expression()
            self._expect_op(")")
            return node
        if token.kind == "ident":
            return self._identifier()
        found = token.text or "end of input"
        raise self._error(f"Unexpected '{found}'")

    def _identifier(self) -> Node:
        token = self._advance()
        name = token.text
        if name == "piecewise":
            return self._piecewise(token)
        if name in _FUNCTIONS:
            return self._call(name, token)
        return Var(self._variable_index(name, token))

    def _variable_index(self, name: str, token: Token) -> int:
        match = _VAR_RE.match(name)
        if match:
            index = int(match.group(1)) - 1
            if index < 0 or index >= self.dim:
                raise self._error(f"Variable '{name}' out of range for dimension {self.dim}", token)
            return index
        if name in _ALIASES:
            if self.dim > 3:
                raise self._error(f"Alias '{name}' is only available for dimension <= 3", token)
            index = _ALIASES[name]
            if index >= self.dim:
                raise self._error(f"Variable '{name}' out of range for dimension {self.dim}", token)
            return index
        raise self._error(f"Unknown identifier '{name}'", token)

    def _call(self, name: str, token: Token) -> Node:
        self._expect_op("(")
        args = [self.expression()]
        while self._is_op(","):
            self._advance()
            args.append(self.expression())
        self._expect_op(")")
        low, high = _FUNCTIONS[name]
        if len(args) < low or (high is not None and len(args) > high):
            raise self._error(f"Function '{name}' takes {low if high == low else f'at least {low}'} "
                              f"argument(s), got {len(args)}", token)
        return Call(name, tuple(args))

    def _piecewise(self, token: Token) -> Node:
        self._expect_op("(")
        branches: List[Tuple[Condition, Node]] = []
        while True:
            if self.current.kind == "ident" and self.current.text == "else":
                self._advance()
                self._expect_op("->")
                otherwise = self.expression()
                if not self._is_op(")"):
                    raise self._error("'else' must be the last piecewise branch")
                self._advance()
                return Piecewise(tuple(branches), otherwise)
            condition = self._condition()
            self._expect_op("->")
            branches.append((condition, self.expression()))
            if self._is_op(")"):
                raise self._error("piecewise requires a trailing 'else' branch")
            self._expect_op(",")

    def _condition(self) -> Condition:
        terms = [self._comparison()]
        while self.current.kind == "ident" and self.current.text == "and":
            self._advance()
            terms.append(self._comparison())
        return terms[0] if len(terms) == 1 else And(tuple(terms))

    def _comparison(self) -> Compare:
        left = self.expression()
        token = self.current
        if token.kind != "op" or token.text not in _RELOPS:
            raise self._error("Expected a comparison operator (<, <=, >, >=)")
        self._advance()
        return Compare(_RELOPS[token.text], left, self.expression())


def parse_node(source: str, dim: int) -> Node:
    if dim < 1:
        raise ExpressionSyntaxError(f"Dimension must be >= 1, got {dim}", 1, source)
    return Parser(source, dim).parse()
