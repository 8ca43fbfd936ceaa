#!/usr/bin/env python3
"""
Utility modules for the LP-type package.

This package contains:
- Error types and exit codes
- Logging utilities
- Exact rational linear algebra
- High-precision weights and exponent histograms
- Named random streams
- Bit codec for simulated messages (``lptype_nets.utils.codec``)
"""

from .errors import (Infeasible, KindMismatch, LpTypeError, MemoryExceeded, MonteCarloFail,
                     NoCrossing, RangeError, StreamAccessError, Unbounded, VerificationFailure,
                     VerticalLine)
from .logging_utils import LoggingManager
from .precision import ExponentHistogram, WeightBase
from .rng_streams import RngStreams

__all__ = [
    'LpTypeError',
    'KindMismatch',
    'Infeasible',
    'Unbounded',
    'MonteCarloFail',
    'VerificationFailure',
    'RangeError',
    'VerticalLine',
    'NoCrossing',
    'MemoryExceeded',
    'StreamAccessError',
    'LoggingManager',
    'ExponentHistogram',
    'WeightBase',
    'RngStreams',
]
