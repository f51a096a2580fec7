import math

import pytest

from coxinv.coxeter import CoxeterMatrix

INF = math.inf


def mat(rows, names=None):
    names = names or [chr(97 + i) for i in range(len(rows))]
    return CoxeterMatrix(names, rows)


@pytest.fixture(scope="session")
def dihedral_inf():
    return mat([[1, INF], [INF, 1]])


@pytest.fixture(scope="session")
def a2():
    return mat([[1, 3], [3, 1]])


@pytest.fixture(scope="session")
def triangle_333():
    return mat([[1, 3, 3], [3, 1, 3], [3, 3, 1]])


@pytest.fixture(scope="session")
def triangle_732():
    return mat([[1, 7, 2], [7, 1, 3], [2, 3, 1]])


@pytest.fixture(scope="session")
def pentagon():
    return mat([
        [1, 2, INF, INF, 2],
        [2, 1, 2, INF, INF],
        [INF, 2, 1, 2, INF],
        [INF, INF, 2, 1, 2],
        [2, INF, INF, 2, 1],
    ])


@pytest.fixture(scope="session")
def square_product():
    # two commuting infinite dihedrals: 4-cycle of right angles
    return mat([
        [1, 2, INF, 2],
        [2, 1, 2, INF],
        [INF, 2, 1, 2],
        [2, INF, 2, 1],
    ])


@pytest.fixture(scope="session")
def path_2edge():
    # a-b-c with a,c not joined: nerve is a path, not a cycle
    return mat([[1, 2, INF], [2, 1, 2], [INF, 2, 1]])
