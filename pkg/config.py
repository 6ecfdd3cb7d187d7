"""Configuration settings for the mirror-feedback qubit simulator."""

import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

# Base paths
BASE_DIR = Path(__file__).parent
OUTPUT_DIR = Path(os.getenv("SIM_OUTPUT_DIR", str(BASE_DIR / "output")))

# Create directories if they don't exist
OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

# App settings
APP_NAME = "simulate"
APP_VERSION = "1.0.0"
LOG_LEVEL = os.getenv("SIM_LOG_LEVEL", "INFO")

# Physical defaults (units of Gamma)
DEFAULT_GAMMA = 1.0
DEFAULT_TAU = 10.0

# Grid settings
# Points per delay interval; delay multiples are always exact grid points
DEFAULT_GRID_N = int(os.getenv("SIM_GRID_N", "1000"))
MIN_GRID_N = 100

# Sweep settings
MAX_WORKERS = int(os.getenv("SIM_WORKERS", str(min(8, os.cpu_count() or 1))))

# Numerical tolerances
QUAD_REL_TOL = 1e-6  # average speed quadrature
QUAD_MAX_DEPTH = 50
EIGEN_CLIP = 1e-15  # eigenvalue floor inside metric functions
PLATEAU_TOL = 1e-12  # |sigma| below this is neither inflow nor outflow
BISECTION_TOL = 1e-10  # extremum refinement, in units of 1/Gamma
CHI_ZERO_TOL = 1e-9  # feedback phase considered 0 mod 2 pi
VERIFY_TOL = 1e-6  # series vs DDE agreement
STEADY_CHECK_HORIZON = 50.0
STEADY_CHECK_TOL = 1e-3

# CSV settings
FLOAT_FORMAT = "%.17g"
