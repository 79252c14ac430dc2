import pytest
from hypothesis import HealthCheck, settings

from quiddsim.quidd import QuiddManager

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture()
def manager():
    return QuiddManager()
