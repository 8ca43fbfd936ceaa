#!/usr/bin/env python3
"""
Exact and high-precision weight arithmetic.

Weights are powers b^a of the base b = n^(1/r) with integer exponents a. They
are kept as exponent histograms and only evaluated when a comparison or a
sampling share is needed: exactly with Python integers when b is an integer,
otherwise with an 80-digit decimal context.
"""

import math
from collections import Counter
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

DECIMAL_DIGITS = 80
# relative slack for non-exact comparisons
SLACK = Decimal(2) ** -100

Real = Union[int, Fraction, Decimal]


def integer_root(n: int, r: int) -> Optional[int]:
    """Exact integer r-th root of n, or None when n is not a perfect power."""
    if n < 0 or r < 1:
        return None
    if n in (0, 1) or r == 1:
        return n
    guess = int(round(n ** (1.0 / r)))
    for candidate in (guess - 1, guess, guess + 1):
        if candidate >= 0 and candidate ** r == n:
            return candidate
    return None


def ceil_rational_power(n: int, exponent: Fraction) -> int:
    """Smallest integer k >= 1 with k >= n^exponent, computed exactly."""
    exponent = Fraction(exponent)
    if exponent <= 0 or n <= 1:
        return 1
    num, den = exponent.numerator, exponent.denominator
    target = n ** num
    k = max(1, int(math.floor(n ** float(exponent))) - 1)
    while k ** den < target:
        k += 1
    while k > 1 and (k - 1) ** den >= target:
        k -= 1
    return k


def to_decimal(value: Real) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        if isinstance(value, Fraction):
            return Decimal(value.numerator) / Decimal(value.denominator)
        return +Decimal(value)


def decimal_ln(value: Real) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return to_decimal(value).ln()


class ExponentHistogram:
    """Multiset of weight exponents: exponent -> number of elements."""

    def __init__(self, counts: Optional[Dict[int, int]] = None):
        self.counts: Counter = Counter()
        if counts:
            for exponent, count in counts.items():
                if count:
                    self.counts[int(exponent)] += int(count)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> 'ExponentHistogram':
        hist = cls()
        hist.counts.update(int(a) for a in exponents)
        return hist

    def add(self, exponent: int, count: int = 1):
        self.counts[int(exponent)] += count

    def merge(self, other: 'ExponentHistogram') -> 'ExponentHistogram':
        merged = ExponentHistogram(dict(self.counts))
        merged.counts.update(other.counts)
        return merged

    def bumped(self) -> 'ExponentHistogram':
        """Histogram with every exponent raised by one."""
        return ExponentHistogram({a + 1: c for a, c in self.counts.items()})

    def minus(self, other: 'ExponentHistogram') -> 'ExponentHistogram':
        left = Counter(self.counts)
        left.subtract(other.counts)
        return ExponentHistogram({a: c for a, c in left.items() if c > 0})

    def items(self) -> List[Tuple[int, int]]:
        return sorted((a, c) for a, c in self.counts.items() if c)

    def size(self) -> int:
        return sum(self.counts.values())

    def max_exponent(self) -> int:
        return max((a for a, c in self.counts.items() if c), default=0)

    def is_empty(self) -> bool:
        return self.size() == 0

    def to_dict(self) -> Dict[int, int]:
        return dict(self.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExponentHistogram):
            return NotImplemented
        return self.items() == other.items()

    def __repr__(self) -> str:
        return f"ExponentHistogram({self.to_dict()})"


class WeightBase:
    """The base b = n^(1/r) with exact or 80-digit evaluation of b^a."""

    def __init__(self, n: int, r: int):
        self.n = int(n)
        self.r = int(r)
        self.integer_base = integer_root(self.n, self.r)
        self.log_base = math.log(self.n) / self.r if self.n > 1 else 0.0
        with localcontext() as ctx:
            ctx.prec = DECIMAL_DIGITS
            self.ln_base = decimal_ln(self.n) / self.r if self.n > 1 else Decimal(0)
            self.decimal_base = self.ln_base.exp()

    @property
    def exact(self) -> bool:
        return self.integer_base is not None

    def power(self, exponent: int) -> Real:
        if self.exact:
            return self.integer_base ** exponent
        with localcontext() as ctx:
            ctx.prec = DECIMAL_DIGITS
            return (self.ln_base * exponent).exp()

    def evaluate(self, hist: ExponentHistogram) -> Real:
        """Σ count·b^a, exact when the base is an integer."""
        if self.exact:
            return sum(c * self.integer_base ** a for a, c in hist.items())
        with localcontext() as ctx:
            ctx.prec = DECIMAL_DIGITS
            total = Decimal(0)
            for a, c in hist.items():
                total += c * (self.ln_base * a).exp()
            return total

    def ln_evaluate(self, hist: ExponentHistogram) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = DECIMAL_DIGITS
            return to_decimal(self.evaluate(hist)).ln()

    def is_light(self, violators: ExponentHistogram, total: ExponentHistogram,
                 nu: int) -> bool:
        """w(V) <= ε·w(S) with ε = 1/(10·ν·b), i.e. 10·ν·b·w(V) <= w(S)."""
        if violators.is_empty():
            return True
        if self.exact:
            lhs = 10 * nu * self.integer_base * self.evaluate(violators)
            return lhs <= self.evaluate(total)
        with localcontext() as ctx:
            ctx.prec = DECIMAL_DIGITS
            lhs = 10 * nu * self.decimal_base * self.evaluate(violators)
            rhs = self.evaluate(total)
            return lhs <= rhs * (1 + SLACK)

    def sandwich(self, total: ExponentHistogram, successes: int, nu: int
                 ) -> Tuple[bool, bool]:
        """Check n^(t/(ν·r)) <= w_t(S) <= e^(t/(10ν))·n after t successes."""
        t = successes
        if self.exact:
            w = self.evaluate(total)
            lower_ok = w ** (nu * self.r) >= self.n ** t
        else:
            with localcontext() as ctx:
                ctx.prec = DECIMAL_DIGITS
                ln_w = self.ln_evaluate(total)
                lower = decimal_ln(self.n) * t / (nu * self.r)
                lower_ok = ln_w >= lower - SLACK * abs(lower)
        with localcontext() as ctx:
            ctx.prec = DECIMAL_DIGITS
            ln_w = self.ln_evaluate(total)
            upper = Decimal(t) / (10 * nu) + decimal_ln(self.n)
            upper_ok = ln_w <= upper + SLACK * abs(upper)
        return lower_ok, upper_ok

    def shares(self, parts: Sequence[ExponentHistogram]) -> List[float]:
        """Normalised weight shares of several histograms as floats."""
        with localcontext() as ctx:
            ctx.prec = DECIMAL_DIGITS
            values = [to_decimal(self.evaluate(h)) for h in parts]
            total = sum(values, Decimal(0))
            if total == 0:
                raise ValueError("cannot split a zero total weight")
            return [float(v / total) for v in values]

    def share(self, part: ExponentHistogram, whole: ExponentHistogram) -> float:
        """Fraction part/whole as a float (whole must be nonzero)."""
        with localcontext() as ctx:
            ctx.prec = DECIMAL_DIGITS
            top = to_decimal(self.evaluate(part))
            bottom = to_decimal(self.evaluate(whole))
            return float(top / bottom) if bottom else 0.0
