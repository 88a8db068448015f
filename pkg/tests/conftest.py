import json
import pathlib

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def oracle_cases():
    return json.loads((FIXTURES / "oracle_values.json").read_text())["cases"]


def rel(x, y):
    return abs(x - y) / abs(y)
