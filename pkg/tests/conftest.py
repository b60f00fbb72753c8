import random

import pytest

from gkesim import (
    setup_community,
    std_params,
    toy_dlog_params,
    toy_medium_params,
    toy_params,
    validate_params,
)


@pytest.fixture
def rng():
    return random.Random(20260816)


@pytest.fixture(scope="session")
def toy():
    return toy_params()


@pytest.fixture(scope="session")
def medium():
    return toy_medium_params()


@pytest.fixture(scope="session")
def dlog_toy():
    return toy_dlog_params()


@pytest.fixture(scope="session")
def std():
    return std_params()


@pytest.fixture(scope="session")
def sig61():
    # 61-bit q: big enough that a flipped-bit challenge collision (~2^-61)
    # cannot make the signature fuzz tests flaky, small enough to stay fast
    return validate_params(20752587082923246163, 1152921504606847009, 262144)


@pytest.fixture(scope="session")
def toy_community():
    return setup_community(8, toy_params(), seed=11, ids="sequential")


@pytest.fixture(scope="session")
def medium_community():
    return setup_community(12, toy_medium_params(), seed=5)


@pytest.fixture(scope="session")
def std_community():
    return setup_community(12, std_params(), seed=5)
