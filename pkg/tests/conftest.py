import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from catalog import catalog
from coxeter import CoxeterSystem


def make_system(name: str, **kwargs) -> CoxeterSystem:
    return CoxeterSystem(catalog(name), name=name, **kwargs)


@pytest.fixture(scope="session")
def a2():
    return make_system("A2")


@pytest.fixture(scope="session")
def a3():
    return make_system("A3")


@pytest.fixture(scope="session")
def b2():
    return make_system("B2")


@pytest.fixture(scope="session")
def b3():
    return make_system("B3")


@pytest.fixture(scope="session")
def a4():
    return make_system("A4")


@pytest.fixture(scope="session")
def d4():
    return make_system("D4")


@pytest.fixture(scope="session")
def h3():
    return make_system("H3")


@pytest.fixture(scope="session")
def aff_a2():
    return make_system("affA2")
