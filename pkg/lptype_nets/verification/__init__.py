#!/usr/bin/env python3
"""
Brute-force oracles and invariant suites.
"""

from .invariants import VerificationReport, tci_errors, verify_problem, verify_tci
from .oracle import brute_solve, brute_tci

__all__ = [
    'VerificationReport',
    'tci_errors',
    'verify_problem',
    'verify_tci',
    'brute_solve',
    'brute_tci',
]
