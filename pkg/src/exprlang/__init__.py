"""
Arithmetic / piecewise expression language used in instance files
"""

from src.exprlang.evaluator import Expression, evaluate, parse, to_source
from src.exprlang.parser import tokenize

__all__ = ["Expression", "evaluate", "parse", "to_source", "tokenize"]
