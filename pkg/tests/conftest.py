import hypothesis
import pytest
import sys

from jacobiscat import CoefficientData
from jacobiscat.generate import random_suite
from tests import delta, diagonal_pair

if _debug := bool(sys.gettrace()):
    hypothesis.settings.register_profile('debug', deadline=None)
    hypothesis.settings.load_profile('debug')
else:
    hypothesis.settings.register_profile('test', deadline=1000)
    hypothesis.settings.load_profile('test')


def pytest_addoption(parser):
    numerics = parser.getgroup("numerics", "Seeded random instance suites")
    numerics.addoption(
        "--suite-size",
        action="store",
        type=int,
        default=10,
        help="Number of seeded random instances (d ≤ 3, support ≤ 5) in each randomized suite. "
             "(default: 10; the full acceptance runs use 50)",
    )
    numerics.addoption(
        "--suite-seed",
        action="store",
        type=int,
        default=0,
        help="First seed of the randomized suites. (default: 0)",
    )


@pytest.fixture(scope='session')
def suite_size(request):
    return request.config.getoption("--suite-size")


@pytest.fixture(scope='session')
def random_instances(request, suite_size):
    return list(random_suite(suite_size, seed=request.config.getoption("--suite-seed")))


@pytest.fixture
def free():
    return CoefficientData.free(1)


@pytest.fixture
def scalar():
    return delta()


@pytest.fixture
def pair():
    return diagonal_pair()


@pytest.fixture(scope='session')
def debug():
    return _debug
