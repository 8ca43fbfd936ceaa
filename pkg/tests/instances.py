"""Small hand-built instances shared by several test modules."""
from fractions import Fraction

from lptype_nets.solvers.lptype import Halfspace
from lptype_nets.solvers.problems import LpInstance


def make_vee(box=10):
    """min y subject to y >= x, y >= -x and |x|, |y| <= box."""
    core = [Halfspace((1, -1), 0), Halfspace((-1, -1), 0)]
    return LpInstance.with_box(2, (0, 1), core, Fraction(box))


def make_infeasible_line():
    """x <= -1 and x >= 1."""
    core = [Halfspace((1, 0), -1), Halfspace((-1, 0), -1)]
    return LpInstance.with_box(2, (0, 1), core)
