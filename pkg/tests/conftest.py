import pytest

from .instances import GOLDEN_WINDOWS, SMALL, build


@pytest.fixture(scope="session")
def golden():
    return build([1, 1, 2, 8, 2, 2], GOLDEN_WINDOWS, [{5: 1, 6: -1}])


@pytest.fixture(scope="session")
def kronecker2():
    return build(*SMALL["kronecker2"])


@pytest.fixture(scope="session")
def kronecker3():
    return build(*SMALL["kronecker3"])


@pytest.fixture(scope="session")
def commutative_square():
    return build(*SMALL["commutative_square"])


@pytest.fixture(scope="session")
def canonical():
    return build(*SMALL["canonical"])


@pytest.fixture(scope="session")
def staircase():
    return build(*SMALL["staircase"])


@pytest.fixture(scope="session")
def relation_free():
    return build(*SMALL["relation_free"])


@pytest.fixture(scope="session", params=sorted(SMALL))
def small(request):
    return build(*SMALL[request.param])
