import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from golden_ep.problems import example21, example61, example62, linear_vi  # noqa: E402

SEED = int(os.environ.get("EQ_SEED", "42"))


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def ex61():
    return example61()


@pytest.fixture(scope="session")
def ex62():
    return example62(101)


@pytest.fixture(scope="session")
def ex21():
    return example21(101)


@pytest.fixture(scope="session")
def lvi():
    return linear_vi()
