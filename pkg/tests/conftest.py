"""Shared fixtures: the bundled zero table, loaded once per session.

The table instance is shared so its lazily computed zeta-line prefix is
reused across test modules instead of being rebuilt per test.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from zetacorr.zeros import ZeroTable, load_zeros

REPO = Path(__file__).resolve().parent.parent
ZEROS_PATH = REPO / "data" / "zeros_100k.csv.gz"


@pytest.fixture(scope="session")
def zeros_path() -> Path:
    return ZEROS_PATH


@pytest.fixture(scope="session")
def zero_table() -> ZeroTable:
    return load_zeros(ZEROS_PATH)
