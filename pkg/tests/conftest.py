from __future__ import annotations

from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
GOLDENS = REPO_ROOT / "goldens"


@pytest.fixture(scope="session")
def goldens() -> Path:
    return GOLDENS
