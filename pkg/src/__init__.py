"""
Inverted variational inequality toolkit
Gap-function solvers and sampled property checkers on compact convex sets
"""

__version__ = "1.0.0"
