import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Config:
    # Dense enumeration
    ENUMERATION_CAP = int(os.getenv('STABRBM_CAP', str(2 ** 24)))
    THREADS = int(os.getenv('STABRBM_THREADS', '1'))

    LOG_LEVEL = os.getenv('STABRBM_LOG_LEVEL', 'INFO')

    # Variational fit defaults
    SEED = int(os.getenv('STABRBM_SEED', '1234'))
    RESTARTS = int(os.getenv('STABRBM_RESTARTS', '8'))
    MAX_ITERATIONS = int(os.getenv('STABRBM_MAX_ITER', '5000'))
    INIT_SCALE = float(os.getenv('STABRBM_INIT_SCALE', '0.05'))
    CONVERGENCE_TOL = float(os.getenv('STABRBM_TOL', '1e-4'))
    GRADIENT_TOL = 1e-9

    # |psi| below this counts as an exact zero
    ZERO_TOL = 1e-10
    # verify passes iff overlap >= 1 - OVERLAP_TOL
    OVERLAP_TOL = 1e-9

    TOOL_VERSION = '1.0.0'
    RBM_FORMAT = 'stabrbm-rbm-v1'
    DENSE_MAGIC = b'STRB'


def enumeration_cap() -> int:
    """Current cap; the environment wins over the import-time default."""
    return int(os.getenv('STABRBM_CAP', str(Config.ENUMERATION_CAP)))


# Export variables at module level for direct import
ENUMERATION_CAP = Config.ENUMERATION_CAP
THREADS = Config.THREADS
ZERO_TOL = Config.ZERO_TOL
OVERLAP_TOL = Config.OVERLAP_TOL
TOOL_VERSION = Config.TOOL_VERSION
RBM_FORMAT = Config.RBM_FORMAT
