"""Bundled STO-3G fixtures (FCIDUMP files plus reference energies)."""
from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

from .integrals import read_fcidump

DATA_DIR = Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def _meta():
    return json.loads((DATA_DIR / "fixtures.json").read_text())


def fixture_names():
    return sorted(_meta())


def fixture_path(name: str) -> Path:
    if name not in _meta():
        raise KeyError(f"unknown fixture {name!r}; have {fixture_names()}")
    return DATA_DIR / f"{name}.fcidump"


def fixture_info(name: str) -> dict:
    """Geometry, basis, sizes and the HF / FCI energies recorded when the file was made."""
    fixture_path(name)
    return dict(_meta()[name])


def load_fixture(name: str):
    return read_fcidump(fixture_path(name))
