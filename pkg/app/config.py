import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Logging Configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# Frame Configuration
FRAME_TOL = float(os.getenv("FRAME_TOL", "1e-9"))
SEED_FRAME_TOL = float(os.getenv("SEED_FRAME_TOL", "1e-12"))
PATCH_FRAME_TOL = float(os.getenv("PATCH_FRAME_TOL", "1e-6"))
RENORM_THRESHOLD = float(os.getenv("RENORM_THRESHOLD", "1e-8"))  # drift that triggers Gram-Schmidt
DRIFT_ABORT = float(os.getenv("DRIFT_ABORT", "1e-3"))
MOTION_TOL = float(os.getenv("MOTION_TOL", "1e-9"))

# Potentials Configuration
QUAD_RTOL = float(os.getenv("QUAD_RTOL", "1e-10"))
DOMAIN_SAMPLES = int(os.getenv("DOMAIN_SAMPLES", "257"))
EXP_CAP = float(os.getenv("EXP_CAP", "300"))  # |I|, |J| above this overflow e^{2I}

# Solver Configuration
BLOWUP_CAP = float(os.getenv("BLOWUP_CAP", "50"))
ELLIPTIC_TOL = float(os.getenv("ELLIPTIC_TOL", "1e-10"))
ELLIPTIC_MAX_ITER = int(os.getenv("ELLIPTIC_MAX_ITER", "20000"))
RESIDUAL_MARGIN = int(os.getenv("RESIDUAL_MARGIN", "1"))

# Surface Invariants Configuration
NET_TOL = float(os.getenv("NET_TOL", "1e-2"))
KAPPA2_TOL = float(os.getenv("KAPPA2_TOL", "1e-10"))
VERIFY_TOL = float(os.getenv("VERIFY_TOL", "5e-3"))

# Parallel Surfaces Configuration
OFFSET_TOL = float(os.getenv("OFFSET_TOL", "1e-12"))  # |1 - a nu| below this is singular

# Job Defaults
DEFAULT_CLASS = os.getenv("DEFAULT_CLASS", "CMC_HALF")
DEFAULT_GRID = os.getenv("DEFAULT_GRID", "128x128")
DEFAULT_STEP = float(os.getenv("DEFAULT_STEP", "0.02"))
DEFAULT_AMPLITUDE = float(os.getenv("DEFAULT_AMPLITUDE", "0.0"))
DEFAULT_WIDTH = float(os.getenv("DEFAULT_WIDTH", "0.1"))
OUTPUT_DIR = os.getenv("OUTPUT_DIR", "output")
