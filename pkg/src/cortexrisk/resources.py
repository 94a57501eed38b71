"""Shipped data-pack resolution.

Packs live inside the package by default; the CORTEX_DATA_DIR environment
variable points lookups at an external directory instead, and individual
files can always be overridden explicitly at call sites.
"""

from __future__ import annotations

import os
from functools import lru_cache
from importlib import resources as _ir
from pathlib import Path

DATA_DIR_ENV = "CORTEX_DATA_DIR"

TAXONOMY_FILE = "cortex_taxonomy.json"
BANDS_FILE = "modifier_bands.json"
CALIBRATION_FILE = "calibration_defaults.json"
SCORING_FILE = "scoring_defaults.json"


def data_path(filename: str) -> Path:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        candidate = Path(override) / filename
        if candidate.exists():
            return candidate
    return Path(str(_ir.files("cortexrisk").joinpath("data", filename)))


@lru_cache(maxsize=None)
def _taxonomy_cached(path: str):
    from .taxonomy import load_taxonomy

    return load_taxonomy(path)


def taxonomy():
    return _taxonomy_cached(str(data_path(TAXONOMY_FILE)))


@lru_cache(maxsize=None)
def _bands_cached(path: str):
    from .calibration import load_band_catalogue

    return load_band_catalogue(path)


def band_catalogue():
    return _bands_cached(str(data_path(BANDS_FILE)))


@lru_cache(maxsize=None)
def _calibration_cached(path: str):
    from .calibration import load_calibration_defaults

    return load_calibration_defaults(path)


def calibration_defaults():
    return _calibration_cached(str(data_path(CALIBRATION_FILE)))


@lru_cache(maxsize=None)
def _scoring_cached(path: str):
    from .scoring import load_scoring_config

    return load_scoring_config(path)


def scoring_defaults():
    return _scoring_cached(str(data_path(SCORING_FILE)))
