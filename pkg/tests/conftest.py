from fractions import Fraction

import pytest

from twistfilt.backend import HeisenbergBackend
from twistfilt.twisted import TwistedFockModule


@pytest.fixture(scope="session")
def backend_t2():
    return HeisenbergBackend(period=2)


@pytest.fixture(scope="session")
def module_t2(backend_t2):
    return TwistedFockModule(backend_t2)


@pytest.fixture(scope="session")
def backend_t1():
    return HeisenbergBackend(period=1)


@pytest.fixture(scope="session")
def module_t1(backend_t1):
    return TwistedFockModule(backend_t1)


@pytest.fixture(scope="session")
def relations_report_t2(module_t2):
    from twistfilt.filtration import verify_relations

    return verify_relations(module_t2, n_max=4, cutoff=Fraction(9, 2))
