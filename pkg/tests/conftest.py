import pytest

from lptype_nets.solvers.lptype import Point
from lptype_nets.solvers.problems import MebInstance

from .instances import make_vee


@pytest.fixture
def vee():
    return make_vee()


@pytest.fixture
def four_points():
    return MebInstance(2, [Point((0, 0)), Point((2, 0)), Point((1, 1)), Point((0, 1))])
