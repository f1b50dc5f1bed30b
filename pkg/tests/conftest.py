import numpy as np
import pytest

from dwdenoise import backends


@pytest.fixture(params=backends.available_backends())
def backend(request):
    """Run the test once per compiled/fallback kernel backend."""
    previous = backends.active_backend_name()
    backends.select_backend(request.param)
    yield request.param
    backends.select_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
