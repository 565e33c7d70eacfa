from pathlib import Path


class Config:
    """Configuration class for the KF modal logic toolkit"""
    # Project Paths
    PROJECT_ROOT = Path(__file__).parent.parent
    LOG_DIR = PROJECT_ROOT / "logs"
    # Logging
    LOG_LEVEL = "WARNING"
    LOG_FILE = None  # e.g. str(LOG_DIR / "kf_modal.log")
    # Decision Procedures
    MAX_ATOMS = 8  # single-rooted enumeration costs 2^a * 4^a models
    # Proof Search
    SEARCH_NODE_LIMIT = 20000
    REFUTE_FRAME_BOUND = 2
    # Sweeps and Audits
    DEFAULT_BOUND = 2
    AUDIT_SIZE_BOUND = 3
    CONNECTING_SIZE_BOUND = 2  # caps --bound for the connecting suite
    NABLA_SIZE_BOUND = 3  # caps --bound for the nabla suite
    SWEEP_MAX_SIDE = 2
    SAMPLED_DERIVATIONS = 200
    SAMPLE_DEPTH = 3
    RANDOM_SEED = 0
    # Output
    DEFAULT_FORMAT = "text"
    JSON_INDENT = 2

    @classmethod
    def create_directories(cls):
        """Create the log directory if it doesn't exist"""
        cls.LOG_DIR.mkdir(parents=True, exist_ok=True)
