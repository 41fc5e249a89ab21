"""
extensions.py - Shared runtime services: logging and the worker pool
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from src.core.config import Config

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once; later calls only change the level."""
    level = (level or Config.LOG_LEVEL).upper()
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(level=level, format=LOG_FORMAT)
    root.setLevel(level)


def resolve_workers(workers: Optional[int] = None) -> int:
    return max(1, int(workers if workers is not None else Config.THREADS))


def worker_pool(workers: Optional[int] = None) -> ThreadPoolExecutor:
    """Executor capped at `workers` (defaults to STABRBM_THREADS)."""
    return ThreadPoolExecutor(max_workers=resolve_workers(workers))
