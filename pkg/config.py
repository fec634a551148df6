"""
config.py - Environment configuration and logging setup
"""

from __future__ import annotations

import logging
import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent

WAHLKIT_THREADS = os.getenv("WAHLKIT_THREADS", "1")
WAHLKIT_ATLAS_DIR = os.getenv("WAHLKIT_ATLAS_DIR", "atlas")
WAHLKIT_LOG_LEVEL = os.getenv("WAHLKIT_LOG_LEVEL", "INFO")
WAHLKIT_PELL_SEEDS = os.getenv("WAHLKIT_PELL_SEEDS", str(BASE_DIR / "data" / "pell_seeds.json"))


def thread_count() -> int:
    """Worker cap for atlas runs. Read at call time so tests can monkeypatch the env."""
    raw = os.getenv("WAHLKIT_THREADS", WAHLKIT_THREADS)
    try:
        value = int(raw)
    except ValueError:
        raise RuntimeError(f"WAHLKIT_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise RuntimeError(f"WAHLKIT_THREADS must be >= 1, got {value}")
    return value


def atlas_dir() -> Path:
    return Path(os.getenv("WAHLKIT_ATLAS_DIR", WAHLKIT_ATLAS_DIR))


def pell_seeds_path() -> Path:
    path = Path(os.getenv("WAHLKIT_PELL_SEEDS", WAHLKIT_PELL_SEEDS))
    if not path.is_file():
        raise RuntimeError(f"WAHLKIT_PELL_SEEDS points to a missing file: {path}")
    return path


def log_level() -> int:
    name = os.getenv("WAHLKIT_LOG_LEVEL", WAHLKIT_LOG_LEVEL).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise RuntimeError(f"WAHLKIT_LOG_LEVEL is not a logging level: {name!r}")
    return level


def configure_logging() -> None:
    logging.basicConfig(
        level=log_level(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
