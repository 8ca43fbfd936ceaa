#!/usr/bin/env python3
"""
Instance generators.

This package contains:
- Random LP, SVM and MEB instances with planted ground truth
- Two-curve intersection instances (base and recursive)
- Reductions to LP (two-curve, disjointness, direct sum)
"""

from .random_instances import gen_digit_lp, gen_meb_points, gen_random_lp, gen_svm_separable
from .reductions import combine_2d, decode_digits, disj_to_lp, tci_to_lp
from .tci import TciInstance, line_segment, origin_shift, slope_shift, step_curve, tci_base, tci_recursive

__all__ = [
    'gen_digit_lp',
    'gen_meb_points',
    'gen_random_lp',
    'gen_svm_separable',
    'combine_2d',
    'decode_digits',
    'disj_to_lp',
    'tci_to_lp',
    'TciInstance',
    'line_segment',
    'origin_shift',
    'slope_shift',
    'step_curve',
    'tci_base',
    'tci_recursive',
]
