import numpy as np
import pytest

from hkcalib import build_model


@pytest.fixture(scope="session")
def model1():
    return build_model(1)


@pytest.fixture(scope="session")
def model2():
    return build_model(2)


@pytest.fixture(scope="session")
def model3():
    return build_model(3)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
