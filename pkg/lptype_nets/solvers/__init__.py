#!/usr/bin/env python3
"""
LP-type problem definitions and solvers.

This package contains:
- Elements, values and the problem definition
- LP, SVM and MEB instances
- The small-instance basis solver
- The in-memory meta-algorithm
"""

from .lptype import (Basis, Halfspace, Kind, LabeledPoint, LpValue, MebValue, Ordering, Point,
                     ProblemDef, SvmValue, order_compare, violates)
from .meta_solver import Mode, epsilon_for, run_meta, sample_net, weight_of
from .problems import LpInstance, MebInstance, SvmInstance, violation_scan
from .small_solver import solve_small

__all__ = [
    'Basis',
    'Halfspace',
    'Kind',
    'LabeledPoint',
    'LpValue',
    'MebValue',
    'Ordering',
    'Point',
    'ProblemDef',
    'SvmValue',
    'order_compare',
    'violates',
    'Mode',
    'epsilon_for',
    'run_meta',
    'sample_net',
    'weight_of',
    'LpInstance',
    'MebInstance',
    'SvmInstance',
    'violation_scan',
    'solve_small',
]
