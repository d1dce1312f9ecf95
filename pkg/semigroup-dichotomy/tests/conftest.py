import os
from unittest import mock

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("numerics", max_examples=40, deadline=None)
settings.load_profile("numerics")


@pytest.fixture(autouse=True)
def clean_environment(tmp_path):
    with mock.patch.dict(
        os.environ,
        {"DICHOTOMY_OUTPUT_DIR": str(tmp_path), "DICHOTOMY_LOG_LEVEL": "WARNING", "DICHOTOMY_TIMEOUT": "600"},
    ):
        yield


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
