"""
Environment configuration
Values come from the process environment, optionally seeded from a .env file
"""

import os

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv("VI_LOG_LEVEL", "WARNING")

# Tolerances
EXACT_TOL = float(os.getenv("VI_EXACT_TOL", "1e-12"))
GEOMETRY_TOL = float(os.getenv("VI_GEOMETRY_TOL", "1e-9"))
DEFAULT_TOL = float(os.getenv("VI_DEFAULT_TOL", "1e-9"))

HULL_MAX_ITER = int(os.getenv("VI_HULL_MAX_ITER", "1000"))

# Largest sample grid any set will build
MAX_GRID_POINTS = int(os.getenv("VI_MAX_GRID_POINTS", "1000000"))

# Gap evaluation
MAX_WORKERS = int(os.getenv("VI_MAX_WORKERS", "4"))
CHUNK_ROWS = int(os.getenv("VI_CHUNK_ROWS", "256"))

DEFAULT_SEED = int(os.getenv("VI_DEFAULT_SEED", "0"))

# Bundled instance files and reproduction fixtures
DATA_DIR = os.getenv("VI_DATA_DIR", os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data"))
