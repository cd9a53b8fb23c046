import mpmath
import pytest
from hypothesis import HealthCheck, settings

from lucas_dirichlet.lucas import validate_params

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def fib():
    return validate_params(1, -1)


@pytest.fixture(autouse=True)
def working_precision():
    with mpmath.workprec(192):
        yield
