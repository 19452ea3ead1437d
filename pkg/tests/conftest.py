from functools import lru_cache

import pytest

from moufang.loopcore import chein_double, cyclic, dihedral, quaternion, symmetric, validate_loop


@lru_cache(maxsize=None)
def chein(kind: str, order: int):
    base = {"symmetric": symmetric, "dihedral": dihedral, "quaternion": quaternion}[kind]
    return chein_double(base(order))


# A nonassociative loop of order 5 (no group of order 5 has an involution).
ORDER5_LOOP = (
    (0, 1, 2, 3, 4),
    (1, 0, 3, 4, 2),
    (2, 4, 0, 1, 3),
    (3, 2, 4, 0, 1),
    (4, 3, 1, 2, 0),
)


@pytest.fixture(scope="session")
def ms3():
    return chein("symmetric", 6)


@pytest.fixture(scope="session")
def md4():
    return chein("dihedral", 8)


@pytest.fixture(scope="session")
def mq8():
    return chein("quaternion", 8)


@pytest.fixture(scope="session")
def md5():
    return chein("dihedral", 10)


@pytest.fixture(scope="session")
def order5():
    return validate_loop(ORDER5_LOOP)


@pytest.fixture
def z4():
    return cyclic(4)


@pytest.fixture
def klein():
    return dihedral(4)
