import pytest

from currentdual import AtomicCurrent, LiouvilleCurrent, load_presentation


@pytest.fixture(scope="session")
def torus():
    return load_presentation("punctured_torus")


@pytest.fixture(scope="session")
def genus2():
    return load_presentation("genus2_octagon")


@pytest.fixture(scope="session")
def liouville(torus):
    return LiouvilleCurrent(torus, 1.0)


@pytest.fixture(scope="session")
def ab_current(torus):
    return AtomicCurrent.from_words(torus, [("a", 1.0), ("b", 1.0)])


@pytest.fixture(scope="session")
def lamination(genus2):
    # two disjoint simple curves
    return AtomicCurrent.from_words(genus2, [("a", 1.0), ("c", 1.0)])
