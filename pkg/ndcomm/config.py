import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name, "")
    if not value:
        return default
    number = int(value)
    if number <= 0:
        raise ValueError(f"{name} must be positive, got {number}")
    return number


INSTANCE_BUDGET = _env_int("NDCOMM_INSTANCE_BUDGET", 2**24)
COVER_BUDGET = _env_int("NDCOMM_COVER_BUDGET", 2**14)
RECTANGLE_BUDGET = _env_int("NDCOMM_RECTANGLE_BUDGET", 2**12)
CLIQUE_BUDGET = _env_int("NDCOMM_CLIQUE_BUDGET", 2**12)
SET_BUDGET = _env_int("NDCOMM_SET_BUDGET", 2**8)
MONOMIAL_BUDGET = _env_int("NDCOMM_MONOMIAL_BUDGET", 2**12)
NEQ_MAX_N = _env_int("NDCOMM_NEQ_MAX_N", 10)

results_dir = os.getenv("NDCOMM_RESULTS_DIR", "")
RESULTS_DB_DIR = Path(results_dir)


def default_threads() -> int:
    """Worker count from NDCOMM_THREADS, else the available parallelism"""
    return _env_int("NDCOMM_THREADS", os.cpu_count() or 1)
