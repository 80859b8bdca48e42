from random import Random

import pytest
from hypothesis import strategies as st

from helpers import (matrix_problem, random_characteristic, random_expr,
                     scalar_problem)


@pytest.fixture(scope="session")
def sp():
    return scalar_problem()


@pytest.fixture(scope="session")
def mp():
    return matrix_problem()


def seeded_exprs(problem, depth=4, scalar_only=False):
    return st.integers(min_value=0, max_value=2**48).map(
        lambda s: random_expr(Random(s), problem, depth, scalar_only))


def seeded_characteristics(problem, depth=2):
    return st.integers(min_value=0, max_value=2**48).map(
        lambda s: random_characteristic(Random(s), problem, depth))
