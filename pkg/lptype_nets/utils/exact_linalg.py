#!/usr/bin/env python3
"""
Exact linear algebra over the rationals.

Small dense systems only (d <= 8), solved by Gauss-Jordan elimination on
Fraction matrices.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]


def as_vector(values: Sequence) -> Vector:
    """Convert any sequence of numbers to a tuple of Fractions."""
    return tuple(Fraction(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for a, b in zip(u, v):
        total += a * b
    return total


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale(t: Fraction, u: Sequence[Fraction]) -> Vector:
    return tuple(t * a for a in u)


def norm_sq(u: Sequence[Fraction]) -> Fraction:
    return dot(u, u)


def row_reduce(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
               ) -> Tuple[List[List[Fraction]], List[int], bool]:
    """Reduce [rows | rhs] to reduced row echelon form.

    Returns:
        tuple: (reduced augmented rows, pivot columns, consistent flag)
    """
    ncols = len(rows[0]) if rows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(aug)) if aug[i][col] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        lead = aug[r][col]
        if lead != 1:
            aug[r] = [v / lead for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    consistent = all(row[-1] == 0 for row in aug[r:])
    return aug, pivots, consistent


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction],
          ncols: Optional[int] = None) -> Optional[Vector]:
    """Return one solution of rows·x = rhs (free variables set to 0).

    Returns None when the system is inconsistent. An empty system yields the
    zero vector of length ncols.
    """
    if not rows:
        return tuple(Fraction(0) for _ in range(ncols or 0))
    width = len(rows[0])
    aug, pivots, consistent = row_reduce(rows, rhs)
    if not consistent:
        return None
    x = [Fraction(0)] * width
    for i, col in enumerate(pivots):
        x[col] = aug[i][-1]
    return tuple(x)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    _, pivots, _ = row_reduce(rows, [0] * len(rows))
    return len(pivots)


def solve_unique(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
                 ) -> Optional[Vector]:
    """Solution of a square-or-taller system of full column rank, else None."""
    if not rows:
        return None
    aug, pivots, consistent = row_reduce(rows, rhs)
    if not consistent or len(pivots) != len(rows[0]):
        return None
    return tuple(aug[i][-1] for i in range(len(pivots)))


def gram_min_norm(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction],
                  dim: int) -> Optional[Vector]:
    """Minimum-norm solution of rows·u = rhs, or None if inconsistent.

    The minimiser lies in the row space: u = rowsᵀ·λ with (rows·rowsᵀ)·λ = rhs.
    """
    if not rows:
        return tuple(Fraction(0) for _ in range(dim))
    gram = [[dot(a, b) for b in rows] for a in rows]
    lam = solve(gram, rhs)
    if lam is None:
        return None
    u = [Fraction(0)] * dim
    for coeff, row in zip(lam, rows):
        if coeff:
            for j in range(dim):
                u[j] += coeff * row[j]
    return tuple(u)
