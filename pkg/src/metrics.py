"""
Process-level counters for solver and checker activity
Declared on import; nothing in the toolkit serves them
"""

from prometheus_client import Counter, Histogram

lhs_evaluations_total = Counter('vi_lhs_evaluations_total', 'Inequality left-hand sides evaluated', ['kind'])
solve_duration_seconds = Histogram('vi_solve_duration_seconds', 'Grid solve duration', ['stage'])
checker_trials_total = Counter('vi_checker_trials_total', 'Checker trials run', ['property', 'status'])
