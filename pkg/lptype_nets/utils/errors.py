#!/usr/bin/env python3
"""
Error types for LP-type solvers and harnesses.

Every error a command can end with carries the process exit code the CLI
reports for it.
"""

from typing import Any, Optional

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_UNBOUNDED = 3
EXIT_MONTE_CARLO_FAIL = 4
EXIT_VERIFICATION_FAILURE = 5


class LpTypeError(Exception):
    """Base class for all package errors."""

    exit_code = EXIT_ERROR
    code_name = "error"


class KindMismatch(LpTypeError, TypeError):
    """Two values or an element and a problem are of different kinds."""

    code_name = "kind-mismatch"


class Infeasible(LpTypeError):
    """Empty feasible region (LP) or non-separable samples (SVM)."""

    exit_code = EXIT_INFEASIBLE
    code_name = "infeasible"


class Unbounded(LpTypeError):
    """LP objective is unbounded below; raised when the bounding box is missing."""

    exit_code = EXIT_UNBOUNDED
    code_name = "unbounded"


class MonteCarloFail(LpTypeError):
    """Monte-Carlo run hit an unsuccessful iteration."""

    exit_code = EXIT_MONTE_CARLO_FAIL
    code_name = "monte-carlo-fail"

    def __init__(self, message: str, trace: Optional[Any] = None):
        super().__init__(message)
        self.trace = trace


class VerificationFailure(LpTypeError):
    """An invariant or oracle comparison failed."""

    exit_code = EXIT_VERIFICATION_FAILURE
    code_name = "verification-failure"


class RangeError(LpTypeError, ValueError):
    """A parameter lies outside the range an operation accepts."""

    code_name = "range"


class VerticalLine(LpTypeError, ValueError):
    """A line through two points with equal x-coordinates was requested."""

    code_name = "vertical-line"


class NoCrossing(LpTypeError, ValueError):
    """Two curves with a_1 > b_1: the crossing promise is violated."""

    code_name = "no-crossing"


class MemoryExceeded(LpTypeError):
    """An MPC machine holds more elements than its memory cap."""

    code_name = "memory-exceeded"


class StreamAccessError(LpTypeError):
    """A stream was read out of order or outside an open pass."""

    code_name = "stream-access"
