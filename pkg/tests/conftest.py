from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

REPO = Path(__file__).resolve().parents[1]


@pytest.fixture
def specs() -> Path:
    return REPO / "specs"
